#include "bjj/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "bjj/errors.hpp"
#include "bjj/numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bjj::wigner {

namespace {

// cached log-factorials
double factln(int n) {
    static std::vector<double> table = [] {
        std::vector<double> t(4096);
        for (size_t i = 0; i < t.size(); ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    if (n < 0) throw NumericalError("factln: negative argument");
    if (n < static_cast<int>(table.size())) return table[n];
    return std::lgamma(n + 1.0);
}

int to_doubled(double x, const char* what) {
    const double d = 2.0 * x;
    const int r = static_cast<int>(std::lround(d));
    if (std::abs(d - r) > 1e-9)
        throw ConfigError(std::string("wigner_3j: ") + what + " must be a half-integer");
    return r;
}

}  // namespace

double wigner_3j(double j1, double j2, double j3, double m1, double m2, double m3) {
    const int tj1 = to_doubled(j1, "j1"), tj2 = to_doubled(j2, "j2"), tj3 = to_doubled(j3, "j3");
    const int tm1 = to_doubled(m1, "m1"), tm2 = to_doubled(m2, "m2"), tm3 = to_doubled(m3, "m3");
    if (tj1 < 0 || tj2 < 0 || tj3 < 0) throw ConfigError("wigner_3j: negative j");
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3)
        throw ConfigError("wigner_3j: |m| > j");
    if (((tj1 + tm1) | (tj2 + tm2) | (tj3 + tm3)) & 1)
        throw ConfigError("wigner_3j: j and m must differ by an integer");

    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if (tj3 < std::abs(tj1 - tj2) || tj3 > tj1 + tj2) return 0.0;
    if ((tj1 + tj2 + tj3) % 2 != 0) return 0.0;  // perimeter must be integral

    // all of these are integers (doubled values are even by the rules above)
    const int a1 = (tj1 + tj2 - tj3) / 2;
    const int a2 = (tj1 - tj2 + tj3) / 2;
    const int a3 = (-tj1 + tj2 + tj3) / 2;
    const int per = (tj1 + tj2 + tj3) / 2;

    const double logdelta = 0.5 * (factln(a1) + factln(a2) + factln(a3) - factln(per + 1));
    const double logfacts =
        0.5 * (factln((tj1 + tm1) / 2) + factln((tj1 - tm1) / 2) + factln((tj2 + tm2) / 2) +
               factln((tj2 - tm2) / 2) + factln((tj3 + tm3) / 2) + factln((tj3 - tm3) / 2));

    const int k_min = std::max({0, (tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2});
    const int k_max = std::min({a1, (tj1 - tm1) / 2, (tj2 + tm2) / 2});
    if (k_min > k_max) return 0.0;

    std::vector<double> terms;
    terms.reserve(k_max - k_min + 1);
    for (int k = k_min; k <= k_max; ++k) {
        const double logden = factln(k) + factln(a1 - k) + factln((tj1 - tm1) / 2 - k) +
                              factln((tj2 + tm2) / 2 - k) +
                              factln((tj3 - tj2 + tm1) / 2 + k) +
                              factln((tj3 - tj1 - tm2) / 2 + k);
        const double mag = std::exp(logdelta + logfacts - logden);
        terms.push_back((k & 1) ? -mag : mag);
    }
    // smallest-magnitude first
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    double sum = 0;
    for (double t : terms) sum += t;

    const int phase = (tj1 - tj2 - tm3) / 2;
    return ((phase & 1) ? -1.0 : 1.0) * sum;
}

SphereGrid SphereGrid::uniform(int n_phi, int n_mu) {
    SphereGrid g;
    g.rule = MuRule::UniformMidpoint;
    g.phi.resize(n_phi);
    for (int k = 0; k < n_phi; ++k) g.phi[k] = -M_PI + 2.0 * M_PI * (k + 0.5) / n_phi;
    g.mu.resize(n_mu);
    g.w_mu.assign(n_mu, 2.0 / n_mu);
    for (int i = 0; i < n_mu; ++i) g.mu[i] = -1.0 + 2.0 * (i + 0.5) / n_mu;
    return g;
}

SphereGrid SphereGrid::gauss(int n_phi, int n_mu) {
    SphereGrid g;
    g.rule = MuRule::GaussLegendre;
    g.phi.resize(n_phi);
    for (int k = 0; k < n_phi; ++k) g.phi[k] = -M_PI + 2.0 * M_PI * (k + 0.5) / n_phi;
    num::gauss_legendre(n_mu, g.mu, g.w_mu);
    return g;
}

MultipoleBasis MultipoleBasis::build(int two_j, bool parallel) {
    if (two_j < 0 || two_j > 64)
        throw ConfigError("MultipoleBasis: dense basis is limited to 2j <= 64");
    MultipoleBasis b;
    b.two_j_ = two_j;
    const double j = 0.5 * two_j;
    const int dim = two_j + 1;
    std::vector<std::pair<int, int>> lm;
    for (int l = 0; l <= two_j; ++l)
        for (int m = -l; m <= l; ++m) lm.emplace_back(l, m);
    b.diags_.resize(lm.size());
    const int n_lm = static_cast<int>(lm.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int idx = 0; idx < n_lm; ++idx) {
        const auto [l, m] = lm[idx];
        Diagonal d;
        d.l = l;
        d.m = m;
        d.row0 = std::max(0, m);
        for (int r = d.row0; r < dim && r - m < dim; ++r) {
            const double mp = -j + r;            // row m'
            const double mpp = mp - m;           // column m'' with -m' + m + m'' = 0
            const double w = wigner_3j(j, l, j, -mp, m, mpp);
            const int par = static_cast<int>(std::lround(j - mp));
            d.values.push_back(((par & 1) ? -1.0 : 1.0) * std::sqrt(2.0 * l + 1.0) * w);
        }
        b.diags_[idx] = std::move(d);
    }
    return b;
}

const MultipoleBasis::Diagonal& MultipoleBasis::at(int l, int m) const {
    if (l < 0 || l > two_j_ || std::abs(m) > l)
        throw ConfigError("MultipoleBasis::at: (l, m) out of range");
    return diags_[static_cast<size_t>(l) * l + l + m];
}

double MultipoleBasis::pair_trace(int l1, int m1, int l2, int m2) const {
    if (m1 != m2) return 0.0;  // diagonals do not overlap
    const auto& a = at(l1, m1);
    const auto& c = at(l2, m2);
    double s = 0;
    for (size_t i = 0; i < std::min(a.values.size(), c.values.size()); ++i)
        s += a.values[i] * c.values[i];
    return s;
}

namespace {

// fully normalized associated Legendre P-bar_l^m(mu) for all l <= lmax,
// m <= l; out[l*(l+1)/2 + m]
void legendre_row(int lmax, double mu, std::vector<double>& out) {
    out.assign(static_cast<size_t>(lmax + 1) * (lmax + 2) / 2, 0.0);
    auto at = [&](int l, int m) -> double& { return out[static_cast<size_t>(l) * (l + 1) / 2 + m]; };
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    at(0, 0) = std::sqrt(1.0 / (4.0 * M_PI));
    for (int m = 1; m <= lmax; ++m) {
        // P_m^m = -sqrt((2m+1)/(2m)) sin(theta) P_{m-1}^{m-1}
        at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sin_t * at(m - 1, m - 1);
    }
    for (int m = 0; m < lmax; ++m) {
        at(m + 1, m) = mu * std::sqrt(2.0 * m + 3.0) * at(m, m);
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
            const double bb = std::sqrt(((2.0 * l + 1.0) * ((l - 1.0) * (l - 1.0) - m * m)) /
                                        ((2.0 * l - 3.0) * (static_cast<double>(l) * l - static_cast<double>(m) * m)));
            at(l, m) = a * mu * at(l - 1, m) - bb * at(l - 2, m);
        }
    }
}

// synthesize field values from coefficients (row-parallel)
void synthesize_grid(WignerField& f) {
    const int lmax = f.two_j;
    const int n_mu = f.grid.n_mu(), n_phi = f.grid.n_phi();
    f.values.assign(static_cast<size_t>(n_mu) * n_phi, 0.0);
#pragma omp parallel
    {
        std::vector<double> pl;
        std::vector<cdouble> gm(lmax + 1);
#pragma omp for schedule(static)
        for (int i = 0; i < n_mu; ++i) {
            legendre_row(lmax, f.grid.mu[i], pl);
            for (int m = 0; m <= lmax; ++m) {
                cdouble acc = 0;
                for (int l = m; l <= lmax; ++l)
                    acc += f.coeff[static_cast<size_t>(l) * (l + 1) + m] *
                           pl[static_cast<size_t>(l) * (l + 1) / 2 + m];
                gm[m] = acc;
            }
            double* row = f.values.data() + static_cast<size_t>(i) * n_phi;
            for (int k = 0; k < n_phi; ++k) {
                const double phi = f.grid.phi[k];
                double v = gm[0].real();
                for (int m = 1; m <= lmax; ++m) {
                    // conjugated harmonics keep the map rotation covariant
                    const cdouble e(std::cos(m * phi), -std::sin(m * phi));
                    v += 2.0 * (gm[m] * e).real();
                }
                row[k] = v;
            }
        }
    }
}

void check_hermiticity(WignerField& f) {
    const int lmax = f.two_j;
    double res = 0;
    for (int l = 0; l <= lmax; ++l)
        for (int m = 1; m <= l; ++m) {
            const cdouble cm = f.coeff[static_cast<size_t>(l) * (l + 1) + m];
            const cdouble cmin = f.coeff[static_cast<size_t>(l) * (l + 1) - m];
            const cdouble want = ((m & 1) ? -1.0 : 1.0) * std::conj(cm);
            res = std::max(res, std::abs(cmin - want));
        }
    f.hermiticity_residual = res;
}

}  // namespace

double WignerField::integral() const {
    double s = 0;
    const int n_phi = grid.n_phi();
    for (int i = 0; i < grid.n_mu(); ++i) {
        double row = 0;
        for (int k = 0; k < n_phi; ++k) row += at(i, k);
        s += grid.w_mu[i] * row;
    }
    return s * grid.phi_cell() / planck_cell();
}

double WignerField::product_integral(const WignerField& b) const {
    if (two_j != b.two_j || grid.n_mu() != b.grid.n_mu() || grid.n_phi() != b.grid.n_phi())
        throw ConfigError("WignerField::product_integral: mismatched fields");
    double s = 0;
    const int n_phi = grid.n_phi();
    for (int i = 0; i < grid.n_mu(); ++i) {
        double row = 0;
        for (int k = 0; k < n_phi; ++k) row += at(i, k) * b.at(i, k);
        s += grid.w_mu[i] * row;
    }
    return s * grid.phi_cell() / planck_cell();
}

WignerField state_to_wigner(const model::QuantumState& state, const SphereGrid& grid) {
    const int dim = state.dim();
    if (dim - 1 > kMaxTransformN)
        throw ConfigError("state_to_wigner: full transform gated to N <= 200");
    std::vector<cdouble> rho(static_cast<size_t>(dim) * dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            rho[static_cast<size_t>(r) * dim + c] = state.amps[r] * std::conj(state.amps[c]);
    return hermitian_to_wigner(rho, dim - 1, grid);
}

WignerField hermitian_to_wigner(std::span<const cdouble> matrix, int two_j,
                                const SphereGrid& grid) {
    const int dim = two_j + 1;
    if (static_cast<int>(matrix.size()) != dim * dim)
        throw ConfigError("hermitian_to_wigner: matrix size mismatch");
    if (two_j > kMaxTransformN)
        throw ConfigError("hermitian_to_wigner: full transform gated to 2j <= 200");
    const double j = 0.5 * two_j;

    WignerField f;
    f.two_j = two_j;
    f.grid = grid;
    f.coeff.assign(static_cast<size_t>(two_j + 1) * (two_j + 1), cdouble(0));

    std::vector<std::pair<int, int>> lm;
    for (int l = 0; l <= two_j; ++l)
        for (int m = -l; m <= l; ++m) lm.emplace_back(l, m);
    const int n_lm = static_cast<int>(lm.size());
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < n_lm; ++idx) {
        const auto [l, m] = lm[idx];
        cdouble acc = 0;
        for (int r = std::max(0, m); r < dim && r - m < dim; ++r) {
            const double mp = -j + r;
            const double mpp = mp - m;
            const double w = wigner_3j(j, l, j, -mp, m, mpp);
            if (w == 0.0) continue;
            const int par = static_cast<int>(std::lround(j - mp));
            // rho_{m'', m'} pairs with psi*_{m'} psi_{m''}
            acc += ((par & 1) ? -1.0 : 1.0) * w * matrix[static_cast<size_t>(r - m) * dim + r];
        }
        f.coeff[static_cast<size_t>(l) * (l + 1) + m] =
            std::sqrt(4.0 * M_PI * (2.0 * l + 1.0) / dim) * acc;
    }
    check_hermiticity(f);
    synthesize_grid(f);
    return f;
}

WignerField coherent_wigner_closed_form(int two_j, const SphereGrid& grid) {
    WignerField f;
    f.two_j = two_j;
    f.grid = grid;
    f.coeff.assign(static_cast<size_t>(two_j + 1) * (two_j + 1), cdouble(0));
    const int dim = two_j + 1;
    for (int l = 0; l <= two_j; ++l) {
        const double logc = std::lgamma(two_j + 1.0) +
                            0.5 * (std::log(4.0 * M_PI * (2.0 * l + 1.0) / dim) -
                                   std::lgamma(two_j + l + 2.0) - std::lgamma(two_j - l + 1.0));
        f.coeff[static_cast<size_t>(l) * (l + 1)] = std::exp(logc);
    }
    synthesize_grid(f);
    return f;
}

double PhaseSpaceApprox::coherent_density(double n, double phi) const {
    double d = phi - phi_center;
    d = std::remainder(d, 2.0 * M_PI);
    const double dn = n - n_center;
    return 1.0 / (sigma_phi * sigma_n) *
           std::exp(-0.5 * d * d / (sigma_phi * sigma_phi) - 0.5 * dn * dn / (sigma_n * sigma_n));
}

double PhaseSpaceApprox::microcanonical_norm(const wkb::ActionTable& table) const {
    const double h = 1e-5 * (table.e_max() - table.e_min());
    const double aprime = (table.area(energy + h) - table.area(energy - h)) / (2 * h);
    return omega_e * aprime / table.params().planck_cell();
}

PhaseSpaceApprox coherent_approximation(const DimerParams& p, double phi0, double n0) {
    PhaseSpaceApprox a;
    a.kind = PhaseSpaceApprox::Kind::EquatorialCoherent;
    a.phi_center = phi0;
    a.n_center = n0;
    a.sigma_phi = 1.0 / std::sqrt(static_cast<double>(p.dim()));
    a.sigma_n = 0.5 * std::sqrt(static_cast<double>(p.dim()));
    return a;
}

PhaseSpaceApprox fock_approximation(const DimerParams& p, double n0) {
    if (std::abs(n0) > 0.5 * p.N) throw ConfigError("fock_approximation: |n| > N/2");
    PhaseSpaceApprox a;
    a.kind = PhaseSpaceApprox::Kind::FockDelta;
    a.fock_n = n0;
    return a;
}

PhaseSpaceApprox microcanonical_approximation(const DimerParams& p, double energy,
                                              const wkb::ActionTable& table) {
    PhaseSpaceApprox a;
    a.kind = PhaseSpaceApprox::Kind::Microcanonical;
    a.energy = energy;
    a.omega_e = table.omega(energy);
    (void)p;
    return a;
}

}  // namespace bjj::wigner
