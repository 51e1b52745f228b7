#include <doctest.h>

#include <cmath>
#include <complex>

#include "bjj/errors.hpp"
#include "bjj/model.hpp"
#include "bjj/rng.hpp"
#include "bjj/wigner.hpp"
#include "oracles.hpp"

using namespace bjj;
using wigner::SphereGrid;
using cdouble = std::complex<double>;

namespace {

std::vector<cdouble> random_hermitian(int n, rng::Stream& rs) {
    std::vector<cdouble> a(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        a[static_cast<size_t>(r) * n + r] = rs.normal();
        for (int c = r + 1; c < n; ++c) {
            const cdouble v(rs.normal(), rs.normal());
            a[static_cast<size_t>(r) * n + c] = v;
            a[static_cast<size_t>(c) * n + r] = std::conj(v);
        }
    }
    return a;
}

double trace_product(const std::vector<cdouble>& a, const std::vector<cdouble>& b, int n) {
    cdouble t = 0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            t += a[static_cast<size_t>(r) * n + c] * b[static_cast<size_t>(c) * n + r];
    return t.real();
}

}  // namespace

TEST_CASE("3j symbols") {
    SUBCASE("frozen small-symbol values") {
        CHECK(wigner::wigner_3j(1, 1, 1, 0, 0, 0) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
        CHECK(wigner::wigner_3j(1, 1, 1, -1, 0, 1) ==
              doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-13));
        CHECK(wigner::wigner_3j(2, 1, 1, 0, 0, 0) ==
              doctest::Approx(std::sqrt(2.0 / 15.0)).epsilon(1e-13));
    }
    SUBCASE("selection rules") {
        CHECK(wigner::wigner_3j(1, 1, 1, 1, 1, -1) == 0.0);  // m-sum != 0
        CHECK(wigner::wigner_3j(1, 1, 3, 0, 0, 0) == 0.0);   // triangle violated
        CHECK_THROWS_AS((void)wigner::wigner_3j(1, 1, 1, 2, -2, 0), ConfigError);
        CHECK_THROWS_AS((void)wigner::wigner_3j(1.2, 1, 1, 0, 0, 0), ConfigError);
    }
    SUBCASE("matches the direct Racah sum at small j") {
        for (double tj1 : {1.0, 2.0, 3.0, 5.0})
            for (double tj2 : {1.0, 2.0, 4.0})
                for (double tj3 : {1.0, 3.0, 5.0}) {
                    const double j1 = tj1 / 2, j2 = tj2 / 2, j3 = tj3 / 2;
                    for (double m1 = -j1; m1 <= j1; m1 += 1)
                        for (double m2 = -j2; m2 <= j2; m2 += 1) {
                            const double m3 = -m1 - m2;
                            if (std::abs(m3) > j3) continue;
                            if (std::abs(std::remainder(j3 - m3, 1.0)) > 1e-9) continue;
                            CHECK(wigner::wigner_3j(j1, j2, j3, m1, m2, m3) ==
                                  doctest::Approx(oracle::wigner3j_direct(j1, j2, j3, m1, m2, m3))
                                      .scale(1)
                                      .epsilon(1e-12));
                        }
                }
    }
}

TEST_CASE("multipole operators are orthonormal") {
    for (int two_j : {1, 4, 9, 20}) {
        const auto basis = wigner::MultipoleBasis::build(two_j);
        for (int l1 = 0; l1 <= two_j; ++l1)
            for (int m1 = -l1; m1 <= l1; ++m1)
                for (int l2 = l1; l2 <= std::min(two_j, l1 + 2); ++l2) {
                    const double want = (l1 == l2) ? 1.0 : 0.0;
                    CHECK(std::abs(basis.pair_trace(l1, m1, l2, m1) - want) < 1e-10);
                }
        // adjoint rule as an operator identity: (T^{lm})^dag = (-1)^m T^{l,-m}
        const int dim = two_j + 1;
        auto dense = [&](int l, int m) {
            std::vector<double> a(static_cast<size_t>(dim) * dim, 0.0);
            const auto& d = basis.at(l, m);
            for (size_t i = 0; i < d.values.size(); ++i) {
                const int r = d.row0 + static_cast<int>(i);
                a[static_cast<size_t>(r) * dim + (r - m)] = d.values[i];
            }
            return a;
        };
        for (int l = 0; l <= two_j; ++l)
            for (int m = 0; m <= l; ++m) {
                const auto tp = dense(l, m);
                const auto tm = dense(l, -m);
                const double sign = (m % 2) ? -1.0 : 1.0;
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c)
                        CHECK(std::abs(tp[static_cast<size_t>(r) * dim + c] -
                                       sign * tm[static_cast<size_t>(c) * dim + r]) < 1e-10);
            }
    }
}

TEST_CASE("weyl symbols of reference operators") {
    const int two_j = 9;
    const int dim = two_j + 1;
    const auto grid = SphereGrid::gauss(48, 32);

    SUBCASE("identity maps to one") {
        std::vector<cdouble> eye(static_cast<size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) eye[static_cast<size_t>(i) * dim + i] = 1.0;
        const auto f = wigner::hermitian_to_wigner(eye, two_j, grid);
        for (double v : f.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
        // and the maximally mixed state integrates to one against dOmega/h
        for (auto& v : eye) v /= dim;
        const auto fm = wigner::hermitian_to_wigner(eye, two_j, grid);
        CHECK(fm.integral() == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("Jx maps to its classical symbol") {
        const double j = 0.5 * two_j;
        std::vector<cdouble> jx(static_cast<size_t>(dim) * dim, 0.0);
        for (int i = 0; i + 1 < dim; ++i) {
            const double m = -j + i;
            const double c = 0.5 * std::sqrt((j - m) * (j + m + 1.0));
            jx[static_cast<size_t>(i + 1) * dim + i] = c;
            jx[static_cast<size_t>(i) * dim + i + 1] = c;
        }
        const auto f = wigner::hermitian_to_wigner(jx, two_j, grid);
        const double scale = std::sqrt(j * (j + 1.0));
        for (int i = 0; i < grid.n_mu(); ++i) {
            const double st = std::sqrt(1.0 - grid.mu[i] * grid.mu[i]);
            for (int k = 0; k < grid.n_phi(); ++k)
                CHECK(f.at(i, k) ==
                      doctest::Approx(scale * st * std::cos(grid.phi[k])).scale(1).epsilon(1e-8));
        }
    }
}

TEST_CASE("coherent-state field: closed form vs transform") {
    const int two_j = 12;
    const auto grid = SphereGrid::gauss(40, 28);
    const auto p = DimerParams::physical(two_j, 0.1, 1.0);
    const auto st = model::prepare(p, model::Preparation::scs(0.0, 0.0));  // |j, j>
    const auto via_state = wigner::state_to_wigner(st, grid);
    const auto closed = wigner::coherent_wigner_closed_form(two_j, grid);
    // only m = 0 coefficients survive
    for (int l = 0; l <= two_j; ++l)
        for (int m = -l; m <= l; ++m) {
            const auto c = via_state.coeff[static_cast<size_t>(l) * (l + 1) + m];
            if (m != 0) CHECK(std::abs(c) < 1e-12);
        }
    for (int i = 0; i < grid.n_mu(); ++i)
        for (int k = 0; k < grid.n_phi(); ++k)
            CHECK(via_state.at(i, k) == doctest::Approx(closed.at(i, k)).scale(1).epsilon(1e-10));
}

TEST_CASE("coherent-state field normalization, purity, and waist") {
    const int two_j = 40;  // N = 40
    const auto grid = SphereGrid::gauss(96, 96);
    const auto f = wigner::coherent_wigner_closed_form(two_j, grid);
    CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(f.product_integral(f) == doctest::Approx(1.0).epsilon(1e-6));

    // small-angle profile ~ 2 exp(-dim theta^2 / 2)
    const int dim = two_j + 1;
    for (double theta : {0.05, 0.15, 0.25, 2.0 / std::sqrt(41.0)}) {
        // synthesize at specific angles via a tiny dedicated grid row
        auto g1 = SphereGrid::uniform(4, 1);
        g1.mu = {std::cos(theta)};
        g1.w_mu = {2.0};
        const auto probe = wigner::coherent_wigner_closed_form(two_j, g1);
        const double want = 2.0 * std::exp(-0.5 * dim * theta * theta);
        CHECK(probe.at(0, 0) == doctest::Approx(want).epsilon(0.05));
    }
}

TEST_CASE("trace rule: operator products equal phase-space overlaps") {
    rng::Stream rs(777);
    for (int two_j : {3, 8, 16}) {
        const int dim = two_j + 1;
        const auto grid = SphereGrid::gauss(2 * (2 * two_j) + 3, 2 * two_j + 2);
        for (int rep = 0; rep < 12; ++rep) {
            const auto a = random_hermitian(dim, rs);
            const auto b = random_hermitian(dim, rs);
            const auto fa = wigner::hermitian_to_wigner(a, two_j, grid);
            const auto fb = wigner::hermitian_to_wigner(b, two_j, grid);
            CHECK(fa.product_integral(fb) ==
                  doctest::Approx(trace_product(a, b, dim)).scale(10).epsilon(1e-6));
        }
    }
}

TEST_CASE("rotation covariance about the spin axis") {
    const auto p = DimerParams::physical(11, 0.4, 1.0);
    const auto st = model::prepare(p, model::Preparation::scs(1.1, 0.4));
    const int n_phi = 48;
    const auto grid = SphereGrid::gauss(n_phi, 24);
    const auto f0 = wigner::state_to_wigner(st, grid);
    // rotate by an integer number of phi cells so grids coincide
    const int shift = 7;
    const double alpha = shift * grid.phi_cell();
    auto rotated = st;
    for (int i = 0; i < rotated.dim(); ++i) {
        const double m = -p.spin_j() + i;
        rotated.amps[i] *= std::exp(cdouble(0, -m * alpha));
    }
    const auto f1 = wigner::state_to_wigner(rotated, grid);
    for (int i = 0; i < grid.n_mu(); ++i)
        for (int k = 0; k < n_phi; ++k)
            CHECK(f1.at(i, (k + shift) % n_phi) ==
                  doctest::Approx(f0.at(i, k)).scale(1).epsilon(1e-6));
}

TEST_CASE("rotation covariance about a transverse axis") {
    // rotate the state with the exponential-map oracle; the field of the
    // rotated state must be the field of the original rotated on the sphere
    const int two_j = 8;
    const double beta = 0.77;
    const auto p = DimerParams::physical(two_j, 0.4, 1.0);
    const auto st = model::prepare(p, model::Preparation::scs(0.0, 0.0));
    const auto rotated_amps = oracle::rotated_top_state(two_j, beta, 0.0);
    model::QuantumState rot{p, rotated_amps};
    auto gaxis = SphereGrid::uniform(8, 6);  // probe points, weights unused
    const auto f = wigner::state_to_wigner(rot, gaxis);
    // the rotated coherent state is axially symmetric about the rotated pole:
    // compare against the closed form evaluated at the angle from that pole
    for (int i = 0; i < gaxis.n_mu(); ++i)
        for (int k = 0; k < gaxis.n_phi(); ++k) {
            const double ct = gaxis.mu[i], stheta = std::sqrt(1 - ct * ct);
            const double cda = std::clamp(
                stheta * std::cos(gaxis.phi[k]) * std::sin(beta) + ct * std::cos(beta), -1.0, 1.0);
            auto probe = SphereGrid::uniform(4, 1);
            probe.mu = {cda};
            probe.w_mu = {2.0};
            const auto ref = wigner::coherent_wigner_closed_form(two_j, probe);
            CHECK(f.at(i, k) == doctest::Approx(ref.at(0, 0)).scale(1).epsilon(1e-6));
        }
}

TEST_CASE("level weights via phase-space overlap") {
    // N = 16: overlap of eigenstate and preparation fields reproduces the
    // quantum level weights
    const auto p = DimerParams::scaled(16, 4.0);
    const auto spec = model::diagonalize(p);
    const auto grid = SphereGrid::gauss(2 * (2 * p.N) + 3, 2 * p.N + 2);
    const auto st = model::prepare(p, model::Preparation::pi());
    const auto prof = model::ldos_quantum(st, spec);
    const auto f_psi = wigner::state_to_wigner(st, grid);
    for (int nu = 0; nu < spec.dim(); ++nu) {
        const auto v = spec.eigenvector(nu);
        model::QuantumState eig{p, std::vector<cdouble>(v.begin(), v.end())};
        const auto f_nu = wigner::state_to_wigner(eig, grid);
        CHECK(f_nu.product_integral(f_psi) ==
              doctest::Approx(prof.weights[nu]).scale(1).epsilon(1e-6));
    }
}

TEST_CASE("transform is gated for large N") {
    const auto p = DimerParams::scaled(201, 4.0);
    const auto st = model::prepare(p, model::Preparation::zero());
    CHECK_THROWS_AS((void)wigner::state_to_wigner(st, SphereGrid::uniform(16, 16)), ConfigError);
}

TEST_CASE("phase-space density approximations") {
    const auto p = DimerParams::scaled(64, 5.0);
    SUBCASE("coherent widths: minimal uncertainty product") {
        const auto a = wigner::coherent_approximation(p, 0.0);
        CHECK(a.sigma_phi * a.sigma_phi * a.sigma_n * a.sigma_n == doctest::Approx(0.25).epsilon(1e-15));
        // normalized against dphi dn / 2pi
        double integral = 0;
        const int nn = 400, np = 400;
        for (int i = 0; i < nn; ++i)
            for (int k = 0; k < np; ++k) {
                const double n = -32.0 + 64.0 * (i + 0.5) / nn;
                const double phi = -M_PI + 2 * M_PI * (k + 0.5) / np;
                integral += a.coherent_density(n, phi) * (64.0 / nn) * (2 * M_PI / np);
            }
        CHECK(integral / (2 * M_PI) == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("fock ring carries all mass at its latitude") {
        const auto a = wigner::fock_approximation(p, 7.0);
        CHECK(a.fock_n == 7.0);
        CHECK_THROWS_AS((void)wigner::fock_approximation(p, 33.0), ConfigError);
    }
    SUBCASE("microcanonical shell is normalized by the oscillation frequency") {
        const auto table = wkb::ActionTable::build(p);
        const double e = 0.3 * p.ground_energy();
        const auto a = wigner::microcanonical_approximation(p, e, table);
        CHECK(a.microcanonical_norm(table) == doctest::Approx(1.0).epsilon(1e-6));
    }
}
