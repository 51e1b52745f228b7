#include <doctest.h>

#include <cmath>
#include <complex>

#include "bjj/errors.hpp"
#include "bjj/model.hpp"
#include "bjj/rng.hpp"
#include "oracles.hpp"

using namespace bjj;
using model::Preparation;

namespace {

std::vector<double> dense_from_tridiag(const model::Tridiagonal& h) {
    const int n = h.dim();
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        a[static_cast<size_t>(i) * n + i] = h.diag[i];
        if (i + 1 < n) {
            a[static_cast<size_t>(i) * n + i + 1] = h.off[i];
            a[static_cast<size_t>(i + 1) * n + i] = h.off[i];
        }
    }
    return a;
}

}  // namespace

TEST_CASE("hamiltonian matrix for two particles") {
    const auto p = DimerParams::physical(2, 1.0, 1.0);
    const auto h = model::build_hamiltonian(p);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(h.diag[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h.diag[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(h.diag[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h.off[0] == doctest::Approx(-s).epsilon(1e-15));
    CHECK(h.off[1] == doctest::Approx(-s).epsilon(1e-15));

    const auto spec = model::diagonalize(h, p);
    const double golden[3] = {(1.0 - std::sqrt(5.0)) / 2.0, 1.0, (1.0 + std::sqrt(5.0)) / 2.0};
    for (int i = 0; i < 3; ++i)
        CHECK(spec.energies[i] == doctest::Approx(golden[i]).epsilon(0).scale(1).epsilon(1e-12));
}

TEST_CASE("hamiltonian rejects bad parameters") {
    CHECK_THROWS_AS((void)DimerParams::physical(0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS((void)DimerParams::physical(4, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS((void)DimerParams::physical(4, 1.0, -2.0), ConfigError);
}

TEST_CASE("free precession spectrum is equally spaced") {
    for (int n : {3, 8, 17}) {
        const auto p = DimerParams::physical(n, 0.0, 0.7);
        const auto spec = model::diagonalize(p);
        CHECK(spec.energies.front() == doctest::Approx(-0.7 * n / 2.0).epsilon(1e-12));
        for (int i = 0; i + 1 < spec.dim(); ++i)
            CHECK(spec.energies[i + 1] - spec.energies[i] ==
                  doctest::Approx(0.7).epsilon(1e-10));
    }
}

TEST_CASE("tridiagonal eigenvalues match dense Jacobi for small N") {
    rng::Stream rs(20240515);
    for (int n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 50; ++rep) {
            const double U = 4.0 * (rs.uniform() - 0.5);
            const double K = 0.1 + 3.0 * rs.uniform();
            const double eps = 3.0 * (rs.uniform() - 0.5);
            const auto p = DimerParams::physical(n, U, K, eps);
            const auto h = model::build_hamiltonian(p);
            const auto spec = model::diagonalize(h, p);
            const auto dense = oracle::jacobi_eigenvalues(dense_from_tridiag(h), h.dim());
            for (int i = 0; i < h.dim(); ++i)
                CHECK(std::abs(spec.energies[i] - dense[i]) < 1e-10);
        }
    }
}

TEST_CASE("top of the spectrum approaches the island-top energy") {
    const auto p = DimerParams::scaled(20, 10.0);
    const auto spec = model::diagonalize(p);
    const double e_plus = p.top_energy();  // 50.5 K
    CHECK(e_plus == doctest::Approx(50.5));
    CHECK(spec.energies.back() == doctest::Approx(e_plus).epsilon(0.05));
}

TEST_CASE("spectrum invariants: residuals, orthonormality, trace, parity, bounds") {
    const auto p = DimerParams::scaled(24, 6.0);
    const auto h = model::build_hamiltonian(p);
    const auto spec = model::diagonalize(h, p);
    const int n = spec.dim();
    const double hnorm = h.norm_inf();

    // residuals and orthonormality
    std::vector<double> hv(n);
    for (int nu = 0; nu < n; ++nu) {
        const auto v = spec.eigenvector(nu);
        h.apply(v.data(), hv.data());
        double res = 0;
        for (int i = 0; i < n; ++i) res = std::max(res, std::abs(hv[i] - spec.energies[nu] * v[i]));
        CHECK(res < 1e-10 * hnorm);
        for (int mu = nu; mu < n; ++mu) {
            const auto w = spec.eigenvector(mu);
            double dot = 0;
            for (int i = 0; i < n; ++i) dot += v[i] * w[i];
            CHECK(std::abs(dot - (nu == mu ? 1.0 : 0.0)) < 1e-10);
        }
    }

    // trace identity
    double tr = 0, se = 0;
    for (int i = 0; i < n; ++i) {
        tr += h.diag[i];
        se += spec.energies[i];
    }
    CHECK(se == doctest::Approx(tr).epsilon(1e-8));

    // every eigenvector has definite parity under m -> -m
    for (int nu = 0; nu < n; ++nu) {
        const auto v = spec.eigenvector(nu);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(v[i] - spec.parity[nu] * v[n - 1 - i]) < 1e-10);
    }

    // spectral bounds for eps = 0, u > 1
    CHECK(spec.energies.front() > p.ground_energy() - p.K);
    CHECK(spec.energies.back() < p.top_energy() + p.K);
}

TEST_CASE("mirror symmetry of the hamiltonian at zero bias") {
    const auto p = DimerParams::scaled(9, 3.0);
    const auto h = model::build_hamiltonian(p);
    const int n = h.dim();
    // [H, R] = 0 entrywise: H_{ij} = H_{n-1-i, n-1-j}
    for (int i = 0; i < n; ++i) {
        CHECK(h.diag[i] == h.diag[n - 1 - i]);
        if (i + 1 < n) CHECK(h.off[i] == doctest::Approx(h.off[n - 2 - i]).epsilon(1e-15));
    }
}

TEST_CASE("level spacing dips to the separatrix frequency") {
    // sea-side ladder gap just below the saddle (the island doublet
    // splittings above it are a different, exponentially small scale)
    const auto p = DimerParams::scaled(20, 10.0);
    const auto spec = model::diagonalize(p);
    const double ex = p.separatrix_energy();
    const double wx = p.omega_separatrix();
    double gap = 0;
    for (int i = 0; i + 1 < spec.dim(); ++i)
        if (spec.energies[i + 1] < ex) gap = spec.energies[i + 1] - spec.energies[i];
    CHECK(gap == doctest::Approx(wx).epsilon(0.25));
}

TEST_CASE("coherent-state preparation") {
    SUBCASE("polar coherent state is the top Fock state") {
        const auto p = DimerParams::physical(7, 0.3, 1.0);
        const auto st = model::prepare(p, Preparation::scs(0.0, 1.234));
        CHECK(std::abs(st.amps.back() - 1.0) < 1e-14);
        for (int i = 0; i + 1 < st.dim(); ++i) CHECK(std::abs(st.amps[i]) < 1e-14);
    }
    SUBCASE("equatorial amplitudes are the square-rooted binomials") {
        const auto p = DimerParams::physical(10, 0.3, 1.0);
        const auto st = model::prepare(p, Preparation::zero());
        const double j = 5.0;
        for (int i = 0; i <= 10; ++i) {
            const double expect =
                std::pow(2.0, -j) *
                std::sqrt(std::exp(std::lgamma(11.0) - std::lgamma(i + 1.0) -
                                   std::lgamma(11.0 - i)));
            CHECK(st.amps[i].real() == doctest::Approx(expect).epsilon(1e-12));
            CHECK(st.amps[i].imag() == 0.0);
        }
    }
    SUBCASE("general angles match the rotation-operator oracle") {
        for (int two_j : {5, 12}) {
            for (double theta : {0.3, 1.1, 2.5}) {
                for (double phi : {0.0, 0.9, -2.0}) {
                    const auto p = DimerParams::physical(two_j, 0.3, 1.0);
                    const auto st = model::prepare(p, Preparation::scs(theta, phi));
                    // library gauge: extra global phase e^{-i j phi}, azimuth -phi
                    const auto ref = oracle::rotated_top_state(two_j, theta, -phi);
                    const double j = 0.5 * two_j;
                    const std::complex<double> gauge = std::exp(std::complex<double>(0, -j * phi));
                    for (int i = 0; i < st.dim(); ++i)
                        CHECK(std::abs(st.amps[i] - gauge * ref[i]) < 1e-10);
                }
            }
        }
    }
    SUBCASE("all preparations are normalized") {
        const auto p = DimerParams::scaled(12, 6.0);
        for (const char* name : {"zero", "pi", "edge", "twinfock", "fock:2", "scs:0.7,1.1"})
            CHECK(std::abs(model::prepare(p, Preparation::parse(name)).norm() - 1.0) < 1e-12);
    }
    SUBCASE("invalid preparations are rejected") {
        CHECK_THROWS_AS((void)model::prepare(DimerParams::physical(5, 0.2, 1.0),
                                             Preparation::twin_fock()),
                        ConfigError);
        CHECK_THROWS_AS((void)model::prepare(DimerParams::scaled(10, 0.5),
                                             Preparation::edge()),
                        ConfigError);
        // the phi = 0 crossing only exists for u > 2
        CHECK_THROWS_AS((void)model::prepare(DimerParams::scaled(10, 1.5),
                                             Preparation::edge()),
                        ConfigError);
        CHECK_THROWS_AS((void)model::prepare(DimerParams::physical(4, 0.2, 1.0),
                                             Preparation::fock(7)),
                        ConfigError);
    }
}

TEST_CASE("evolution basics") {
    const auto p = DimerParams::scaled(16, 3.0);
    const auto spec = model::diagonalize(p);
    const auto st = model::prepare(p, Preparation::zero());

    SUBCASE("tau = 0 is the identity") {
        const auto out = model::evolve(st, spec, 0.0);
        for (int i = 0; i < st.dim(); ++i) CHECK(std::abs(out.amps[i] - st.amps[i]) < 1e-12);
    }
    SUBCASE("parameter mismatch is rejected") {
        const auto other = model::prepare(DimerParams::scaled(16, 3.5), Preparation::zero());
        CHECK_THROWS_AS((void)model::evolve(other, spec, 1.0), ConfigError);
    }
    SUBCASE("norm and energy are conserved") {
        for (double tau : {0.7, 13.0, 251.0}) {
            const auto out = model::evolve(st, spec, tau);
            CHECK(std::abs(out.norm() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("zero preparation is stationary without interaction") {
    const auto p = DimerParams::physical(14, 0.0, 1.0);
    const auto spec = model::diagonalize(p);
    const auto st = model::prepare(p, Preparation::zero());
    for (double tau : {0.5, 3.0, 20.0}) {
        const auto out = model::evolve(st, spec, tau);
        CHECK(model::bloch_vector(out).x == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("free evolution rotates the Bloch vector about x") {
    // H = -K Jx generates Jz(t) = Jz cos(tau) - Jy sin(tau)
    const auto p = DimerParams::physical(12, 0.0, 1.0);
    const auto spec = model::diagonalize(p);
    for (double theta : {0.4, 1.3}) {
        for (double phi : {0.2, -1.0}) {
            const auto st = model::prepare(p, Preparation::scs(theta, phi));
            const auto s0 = model::bloch_vector(st);
            for (double tau : {0.3, 2.2}) {
                const auto s = model::bloch_vector(model::evolve(st, spec, tau));
                CHECK(s.x == doctest::Approx(s0.x).epsilon(1e-8));
                CHECK(s.y == doctest::Approx(s0.y * std::cos(tau) + s0.z * std::sin(tau))
                                 .scale(1.0)
                                 .epsilon(1e-8));
                CHECK(s.z == doctest::Approx(s0.z * std::cos(tau) - s0.y * std::sin(tau))
                                 .scale(1.0)
                                 .epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("bloch vector of the named preparations") {
    const auto p = DimerParams::scaled(30, 5.0);
    const auto zero = model::bloch_vector(model::prepare(p, Preparation::zero()));
    CHECK(zero.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(zero.y) < 1e-12);
    CHECK(std::abs(zero.z) < 1e-12);
    CHECK(zero.one_body_purity() == doctest::Approx(1.0).epsilon(1e-10));

    const auto tf = model::bloch_vector(model::prepare(p, Preparation::twin_fock()));
    CHECK(std::abs(tf.x) < 1e-12);
    CHECK(std::abs(tf.y) < 1e-12);
    CHECK(std::abs(tf.z) < 1e-12);

    // coherent states have unit purity
    const auto scs = model::bloch_vector(model::prepare(p, Preparation::scs(0.9, 2.0)));
    CHECK(scs.one_body_purity() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(scs.norm() <= 1.0 + 1e-10);
}

TEST_CASE("transverse symmetry: Sy vanishes for equatorial preparations") {
    const auto p = DimerParams::scaled(24, 4.0);
    const auto spec = model::diagonalize(p);
    for (const char* name : {"zero", "pi", "twinfock"}) {
        const auto st = model::prepare(p, Preparation::parse(name));
        for (double tau : {0.9, 7.7, 40.1}) {
            const auto s = model::bloch_vector(model::evolve(st, spec, tau));
            CHECK(std::abs(s.y) < 1e-10);
        }
    }
}

TEST_CASE("occupation distributions") {
    const auto p = DimerParams::scaled(12, 4.0);
    SUBCASE("fock state is a delta") {
        const auto st = model::prepare(p, Preparation::fock(3));
        const auto pr = model::occupation_distribution(st);
        CHECK(pr[3 + 6] == doctest::Approx(1.0));
    }
    SUBCASE("equatorial coherent state is binomial") {
        const auto st = model::prepare(p, Preparation::zero());
        const auto pr = model::occupation_distribution(st);
        double sum = 0;
        for (int i = 0; i <= 12; ++i) {
            const double binom = std::exp(std::lgamma(13.0) - std::lgamma(i + 1.0) -
                                          std::lgamma(13.0 - i)) /
                                 4096.0;
            CHECK(pr[i] == doctest::Approx(binom).epsilon(1e-10));
            sum += pr[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("occupation statistics develop caustic-like edges") {
    // the spreading fronts pile up probability near the turning latitudes
    // and fall off steeply beyond them
    const auto p = DimerParams::scaled(40, 5.0);
    const auto spec = model::diagonalize(p);
    const auto st = model::evolve(model::prepare(p, Preparation::twin_fock()), spec, 4.0);
    const auto pr = model::occupation_distribution(st);
    double front = 0, inner_dip = 1e300, beyond = 0;
    for (int i = 0; i <= 40; ++i) {
        const int an = std::abs(i - 20);
        if (an >= 11 && an <= 14) front = std::max(front, pr[i]);
        if (an >= 8 && an <= 10) inner_dip = std::min(inner_dip, pr[i]);
        if (an >= 17) beyond = std::max(beyond, pr[i]);
    }
    CHECK(front > 4.0 * inner_dip);
    CHECK(beyond < 0.05 * front);
}

TEST_CASE("quantum level weights") {
    SUBCASE("eigenstate occupies one level") {
        const auto p = DimerParams::physical(10, 0.0, 1.0);
        const auto spec = model::diagonalize(p);
        const auto st = model::prepare(p, Preparation::zero());
        const auto prof = model::ldos_quantum(st, spec);
        CHECK(prof.weights[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(prof.participation() == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("odd-parity levels are dark for mirror-symmetric states") {
        const auto p = DimerParams::scaled(14, 3.0);
        const auto spec = model::diagonalize(p);
        const auto prof = model::ldos_quantum(model::prepare(p, Preparation::twin_fock()), spec);
        for (int nu = 0; nu < spec.dim(); ++nu)
            if (spec.parity[nu] < 0) CHECK(prof.weights[nu] < 1e-20);
    }
}

TEST_CASE("unitarity over long horizons") {
    const auto p = DimerParams::scaled(24, 5.0);
    const auto spec = model::diagonalize(p);
    const auto st = model::prepare(p, Preparation::pi());
    std::vector<double> tau;
    for (int i = 0; i <= 64; ++i) tau.push_back(1000.0 * i / 64.0);
    const auto bs = model::evolve_bloch_series(st, spec, tau);
    const double e0 = bs.energy[0], e20 = bs.energy_sq[0];
    for (size_t k = 0; k < tau.size(); ++k) {
        CHECK(bs.norm_error[k] < 1e-10);
        CHECK(std::abs(bs.energy[k] - e0) < 1e-8 * std::abs(e0));
        CHECK(std::abs(bs.energy_sq[k] - e20) < 1e-8 * std::abs(e20));
    }
}

TEST_CASE("series kernel: parallel and serial agree bit for bit") {
    const auto p = DimerParams::scaled(20, 4.0);
    const auto spec = model::diagonalize(p);
    const auto st = model::prepare(p, Preparation::edge());
    std::vector<double> tau;
    for (int i = 0; i < 300; ++i) tau.push_back(0.05 * i);
    const auto a = model::evolve_bloch_series(st, spec, tau, true);
    const auto b = model::evolve_bloch_series(st, spec, tau, false);
    for (size_t k = 0; k < tau.size(); ++k) {
        CHECK(a.sx[k] == b.sx[k]);
        CHECK(a.sy[k] == b.sy[k]);
        CHECK(a.sz[k] == b.sz[k]);
    }
}
