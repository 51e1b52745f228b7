#include "bjj/analytics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "bjj/constants.hpp"
#include "bjj/errors.hpp"
#include "bjj/numerics.hpp"

namespace bjj::analytics {

// ---- LdosProfile ------------------------------------------------------

LdosProfile LdosProfile::from_weights(const DimerParams& params,
                                      std::vector<double> energies,
                                      std::vector<double> weights) {
    if (energies.size() != weights.size())
        throw ConfigError("LdosProfile: level/weight size mismatch");
    double sum = 0;
    for (double w : weights) {
        if (w < -1e-12) throw ConfigError("LdosProfile: negative weight");
        sum += w;
    }
    if (sum <= 0) throw ConfigError("LdosProfile: all weights vanish");
    for (double& w : weights) w = std::max(0.0, w) / sum;
    LdosProfile out;
    out.params = params;
    out.energies = std::move(energies);
    out.weights = std::move(weights);
    return out;
}

double LdosProfile::participation() const {
    double s2 = 0;
    for (double w : weights) s2 += w * w;
    return 1.0 / s2;
}

double LdosProfile::mean_energy() const {
    double m = 0;
    for (size_t i = 0; i < weights.size(); ++i) m += weights[i] * energies[i];
    return m;
}

double LdosProfile::energy_width() const {
    const double m = mean_energy();
    double v = 0;
    for (size_t i = 0; i < weights.size(); ++i)
        v += weights[i] * (energies[i] - m) * (energies[i] - m);
    return std::sqrt(std::max(0.0, v));
}

double LdosProfile::beat_frequency() const {
    const double wmax = *std::max_element(weights.begin(), weights.end());
    double num = 0, den = 0;
    std::optional<size_t> prev;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 1e-4 * wmax) continue;
        if (prev) {
            const double w = weights[*prev] * weights[i];
            num += w * (energies[i] - energies[*prev]);
            den += w;
        }
        prev = i;
    }
    return den > 0 ? num / den : 0.0;
}

bool LdosProfile::discrete_dominated() const {
    return participation() < std::sqrt(static_cast<double>(params.dim()));
}

// ---- Bessel kernels ----------------------------------------------------

double bessel_i0(double x) { return boost::math::cyl_bessel_i(0, std::abs(x)); }

double bessel_k0(double x) {
    if (x <= 0) throw ConfigError("bessel_k0: requires x > 0");
    return boost::math::cyl_bessel_k(0, x);
}

namespace {

// asymptotic tails, truncated at the smallest term
double log_i0_asym(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
        if (next >= term && k > 2) break;
        term = next;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return x - 0.5 * std::log(2.0 * M_PI * x) + std::log(sum);
}

double log_k0_asym(double x) {
    double term = 1.0, sum = 1.0, sign = -1.0;
    for (int k = 1; k < 40; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
        if (next >= term && k > 2) break;
        term = next;
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18 * std::abs(sum)) break;
    }
    return -x + 0.5 * std::log(M_PI / (2.0 * x)) + std::log(sum);
}

}  // namespace

double log_bessel_i0(double x) {
    x = std::abs(x);
    if (x < 650.0) return std::log(bessel_i0(x));
    return log_i0_asym(x);
}

double log_bessel_k0(double x) {
    if (x <= 0) throw ConfigError("log_bessel_k0: requires x > 0");
    if (x < 600.0) return std::log(bessel_k0(x));
    return log_k0_asym(x);
}

double bessel_i0_scaled(double x) { return std::exp(log_bessel_i0(x) - std::abs(x)); }

double bessel_k0_scaled(double x) {
    if (x <= 0) throw ConfigError("bessel_k0_scaled: requires x > 0");
    return std::exp(log_bessel_k0(x) + x);
}

double capped_bessel_k0(double z, double s_max) {
    if (z < 0) throw ConfigError("capped_bessel_k0: requires z >= 0");
    if (s_max <= 0) return 0.0;
    if (z == 0.0) return s_max;
    // beyond s_tail the integrand is below e^-46 of its peak
    const double s_tail = std::acosh(1.0 + 46.0 / z);
    if (s_max >= s_tail) return bessel_k0(z);
    return num::integrate_gl([&](double s) { return std::exp(-z * (std::cosh(s) - 1.0)); },
                             0.0, s_max, 256) *
           std::exp(-z);
}

// ---- semiclassical LDOS -------------------------------------------------

namespace {

int preparation_parity(const model::Preparation& prep, const DimerParams& p) {
    using Kind = model::Preparation::Kind;
    switch (prep.kind) {
        case Kind::Zero:
        case Kind::TwinFock:
            return +1;
        case Kind::Pi:
            return p.N % 2 == 0 ? +1 : -1;
        default:
            return 0;  // not mirror symmetric
    }
}

}  // namespace

LdosProfile ldos_semiclassical(const model::Preparation& prep, const DimerParams& p,
                               std::span<const double> energies,
                               std::span<const int> parity,
                               const wkb::ActionTable& table) {
    using Kind = model::Preparation::Kind;
    if (p.eps != 0.0) throw ConfigError("ldos_semiclassical: defined at eps = 0");
    if (prep.kind != Kind::Zero && prep.kind != Kind::Pi && prep.kind != Kind::Edge &&
        prep.kind != Kind::TwinFock)
        throw ConfigError("ldos_semiclassical: supported preparations are Zero/Pi/Edge/TwinFock");
    if (p.U <= 0) throw ConfigError("ldos_semiclassical: requires U > 0");
    if (table.radius() != wkb::RadiusConvention::HalfInteger)
        throw ConfigError("ldos_semiclassical: needs the half-integer-radius action table "
                          "(its stationary energies bracket the exact spectrum)");

    // Stationary reference energies of the effective (half-integer radius)
    // phase space; exact levels sit inside this range.
    const double e_floor = table.e_min();
    const double e_saddle = table.e_saddle() ? *table.e_saddle() : table.e_max();
    const double wj = p.omega_josephson();
    const double nu_energy = p.N * p.U;
    // Exponential-kernel coefficients from the isotropic minimal packet,
    // sigma_phi^2 = 1/dim and sigma_n^2 = dim/4 (these reproduce the exact
    // energy moments of a coherent state).
    const double cplus = 1.0 / p.K + 1.0 / nu_energy;
    const double cminus = 1.0 / p.K - 1.0 / nu_energy;

    auto log_density = [&](double e) -> double {
        switch (prep.kind) {
            case Kind::Zero: {
                const double de = e - e_floor;
                if (de < 0) return -1e300;
                return -cplus * de + log_bessel_i0(cminus * de);
            }
            case Kind::Pi: {
                const double de = e - e_saddle;
                const double z = std::max(cplus * std::abs(de), 1e-14);
                return cminus * de + log_bessel_k0(z);
            }
            case Kind::Edge: {
                const double de = (e - e_saddle) / wj;
                return -de * de / p.dim();
            }
            case Kind::TwinFock:
            default: {
                const double r = e / e_saddle;
                if (std::abs(r) >= 1.0) return -1e300;
                return -0.5 * std::log(1.0 - r * r);
            }
        }
    };

    // Weights are the density integrated over each level's Planck cell in
    // action, mapped through the monotone A(E) table: the cell width in
    // energy supplies the oscillation-frequency factor of the line shapes,
    // and the integrable kernel singularities are handled exactly.
    const int want_parity = preparation_parity(prep, p);
    const bool cull = want_parity != 0 && !parity.empty();
    const double cell_half = cull ? p.planck_cell() : 0.5 * p.planck_cell();

    std::vector<double> w(energies.size(), 0.0);
    for (size_t i = 0; i < energies.size(); ++i) {
        if (cull && parity[i] != want_parity) continue;
        const double e = std::clamp(energies[i], table.e_min(), table.e_max());
        const double a = table.area(e);
        const double lo = table.energy_at_area(a - cell_half);
        const double hi = table.energy_at_area(a + cell_half);
        if (hi - lo <= 0) continue;
        const int quad = 96;
        double s = 0;
        for (int q = 0; q < quad; ++q)
            s += std::exp(log_density(lo + (hi - lo) * (q + 0.5) / quad));
        w[i] = s / quad * (hi - lo);
    }
    return LdosProfile::from_weights(p, {energies.begin(), energies.end()}, std::move(w));
}

LdosProfile ldos_semiclassical(const model::Preparation& prep, const model::Spectrum& spec,
                               const wkb::ActionTable& table) {
    return ldos_semiclassical(prep, spec.params, spec.energies, spec.parity, table);
}

// ---- estimates ----------------------------------------------------------

ParticipationEstimate participation_estimate(const model::Preparation& prep,
                                             const DimerParams& p) {
    using Kind = model::Preparation::Kind;
    const double u = p.coupling_u();
    ParticipationEstimate est;
    est.semiclassical_ratio = std::sqrt(u / p.N);
    est.within_validity = (u > 1.0) && (u / p.N < 1.0);
    const double lg = std::log(static_cast<double>(p.N) / u);
    switch (prep.kind) {
        case Kind::Pi:
            est.participation = lg * std::sqrt(u);
            break;
        case Kind::Edge:
            est.participation = lg * std::sqrt(static_cast<double>(p.N));
            break;
        default:
            throw ConfigError("participation_estimate: closed forms exist for Pi and Edge only");
    }
    return est;
}

FrequencyEstimate frequency_estimate(const model::Preparation& prep, const DimerParams& p) {
    using Kind = model::Preparation::Kind;
    const double u = p.coupling_u();
    FrequencyEstimate est;
    if (u / p.N >= 1.0) {
        // number-squeezed regime: plain phase diffusion of separated modes
        est.fock_branch = true;
        est.intrinsic = constants::fitted().phase_diffusion_prefactor * p.U *
                        std::sqrt(static_cast<double>(p.N));
        est.observed = 2.0 * est.intrinsic;
        return est;
    }
    switch (prep.kind) {
        case Kind::Zero:
            est.intrinsic = p.omega_josephson();
            break;
        case Kind::Pi:
            est.intrinsic = p.omega_josephson() / std::log(static_cast<double>(p.N) / u);
            break;
        case Kind::Edge:
            est.intrinsic = 2.0 * p.omega_josephson() / std::log(static_cast<double>(p.N) / u);
            break;
        default:
            throw ConfigError("frequency_estimate: supported preparations are Zero/Pi/Edge");
    }
    est.observed = 2.0 * est.intrinsic;
    return est;
}

// ---- phase distributions -------------------------------------------------

double PhaseDistribution::mean_cos() const {
    // Simpson on the uniform grid (odd point count)
    const size_t n = phi.size();
    const double h = phi[1] - phi[0];
    double s = 0;
    for (size_t i = 0; i < n; ++i) {
        const double f = std::cos(phi[i]) * pdf[i];
        const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        s += w * f;
    }
    return s * h / 3.0;
}

double PhaseDistribution::separatrix_border_n(double phi) const {
    return wkb::separatrix_border_n(params, phi);
}

PhaseDistribution phase_distribution(const model::Preparation& prep, const DimerParams& p,
                                     int grid) {
    using Kind = model::Preparation::Kind;
    if (grid < 33) throw ConfigError("phase_distribution: grid too small");
    if (grid % 2 == 0) ++grid;
    const double x = p.coupling_u() / p.N;

    PhaseDistribution d;
    d.params = p;
    d.phi.resize(grid);
    d.pdf.resize(grid);
    for (int i = 0; i < grid; ++i)
        d.phi[i] = -M_PI + 2.0 * M_PI * i / (grid - 1);

    for (int i = 0; i < grid; ++i) {
        const double phi = d.phi[i];
        double v;
        switch (prep.kind) {
            case Kind::Zero:
                v = std::exp(-phi * phi / (4.0 * x));
                break;
            case Kind::Pi: {
                const double c = std::cos(0.5 * phi);
                v = 1.0 / std::sqrt(x + c * c);
                break;
            }
            case Kind::TwinFock:
                v = std::cos(0.5 * phi);
                break;
            default:
                throw ConfigError("phase_distribution: closed forms exist for Zero/Pi/TwinFock");
        }
        d.pdf[i] = v;
    }
    // normalize by Simpson
    const double h = d.phi[1] - d.phi[0];
    double s = 0;
    for (int i = 0; i < grid; ++i) {
        const double w = (i == 0 || i == grid - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        s += w * d.pdf[i];
    }
    s *= h / 3.0;
    for (double& v : d.pdf) v /= s;
    return d;
}

LongTimeAverage long_time_average(const model::Preparation& prep, const DimerParams& p) {
    using Kind = model::Preparation::Kind;
    const double x = p.coupling_u() / p.N;
    LongTimeAverage out;
    switch (prep.kind) {
        case Kind::Zero:
            out.closed_form = std::exp(-x);
            break;
        case Kind::Pi: {
            if (x > 0.5)
                throw ConfigError("long_time_average: Pi closed form requires u/N <= 1/2");
            out.closed_form = -1.0 - 4.0 / std::log(x / 32.0);
            break;
        }
        case Kind::TwinFock:
            out.closed_form = 1.0 / 3.0;
            break;
        default:
            throw ConfigError("long_time_average: closed forms exist for Zero/Pi/TwinFock");
    }
    out.quadrature = phase_distribution(prep, p).mean_cos();
    return out;
}

// ---- fluctuations ---------------------------------------------------------

double rms_prediction(const LdosProfile& profile, double classical_area) {
    if (classical_area < 0) throw ConfigError("rms_prediction: negative spectral area");
    return std::sqrt(classical_area / profile.participation());
}

ExactFluctuation fluctuation_rms_exact(const model::Spectrum& spec,
                                       const model::QuantumState& state) {
    const int n = spec.dim();
    const auto a = model::sx_matrix_elements(spec);
    const auto prof = model::ldos_quantum(state, spec);
    const auto& pw = prof.weights;
    ExactFluctuation out;
    double second = 0;
    for (int nu = 0; nu < n; ++nu) {
        out.time_average += pw[nu] * a[static_cast<size_t>(nu) * n + nu];
        for (int mu = 0; mu < n; ++mu) {
            if (mu == nu) continue;
            const double el = a[static_cast<size_t>(nu) * n + mu];
            second += pw[nu] * pw[mu] * el * el;
        }
    }
    out.second_moment = second;
    out.rms = std::sqrt(std::max(0.0, second));
    return out;
}

double revival_time(const DimerParams& p, std::span<const double> levels, int nu) {
    if (nu <= 0 || nu + 1 >= static_cast<int>(levels.size()))
        throw ConfigError("revival_time: level index at the spectrum edge");
    const double de = 0.5 * (levels[nu + 1] - levels[nu - 1]);
    if (de <= 0) throw NumericalError("revival_time: non-increasing ladder");
    return 2.0 * M_PI * p.K / de;
}

}  // namespace bjj::analytics
