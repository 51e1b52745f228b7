#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bjj/numerics.hpp"
#include "bjj/params.hpp"

namespace bjj::wkb {

// Classical Hamiltonian on the sphere,
//   H(theta, phi) = (N K / 2) [ (u/2) cos^2(theta) - eps_s cos(theta)
//                               - sin(theta) cos(phi) ],
// with theta in [0, pi] the polar angle and phi in (-pi, pi].
double classical_hamiltonian(double theta, double phi, const DimerParams& p);

// Number-phase chart, U n^2 - eps n - K sqrt((N/2)^2 - n^2) cos(phi).
// Diagnostic only; agrees with the spherical form under n = (N/2) cos(theta).
double number_phase_hamiltonian(double n, double phi, const DimerParams& p);

// Spin length conventions: N/2 (the classical surface everywhere in this
// module), sqrt(j(j+1)) (the exact Casimir), and j + 1/2 (used for WKB
// quantization, where it makes the non-interacting ladder exact).
enum class RadiusConvention { LargeJ, Exact, HalfInteger };
double spin_radius(const DimerParams& p, RadiusConvention rc);

struct PhasePoint {
    double theta = 0, phi = 0;
    double n(const DimerParams& p, RadiusConvention rc = RadiusConvention::LargeJ) const;
    static PhasePoint from_number_phase(double n, double phi, const DimerParams& p,
                                        RadiusConvention rc = RadiusConvention::LargeJ);
};

// Section phi in {0, pi} parameterized by a signed angle in (-pi, pi]:
// positive angles are the phi = 0 half, negative the phi = pi half.
// E(theta) = (NK/2) f(theta) with f below.
double section_f(double theta, double u, double eps_s);
double section_df(double theta, double u, double eps_s);
double section_ddf(double theta, double u, double eps_s);
double section_energy(double theta_signed, const DimerParams& p);

struct FixedPoint {
    enum class Type { Minimum, Saddle, Maximum };
    double theta_signed = 0;
    double energy = 0;
    Type type = Type::Minimum;
};

struct FixedPointSet {
    std::vector<FixedPoint> points;  // sorted by theta
    bool has_separatrix = false;
    // section angles (NaN when absent)
    double theta_minus, theta_x, theta_1, theta_2;
    double theta_1p, theta_2p;  // outer island borders on the section
    double E_minus, E_x, E_plus;
    double global_min_energy, global_max_energy;
    // constants of the critical-bias island (functions of u alone, u > 1)
    double s_x, s_1p, A_c;
};

FixedPointSet find_fixed_points(const DimerParams& p);

// eps_c = (u^{2/3} - 1)^{3/2}; throws ConfigError for u <= 1 (no separatrix).
double critical_bias(double u);

// Phase-space area (steradians) enclosed below energy E:
//   A(E) = integral of Theta(E - H) over dphi dcos(theta).
// The phi integral is done in closed form, leaving a 1-D quadrature in
// cos(theta) split at the turning points.
double action_area(double E, const DimerParams& p);

// Separatrix crossing of the phi = 0 meridian on the n > 0 branch;
// requires the crossing to exist (u > 2 at zero bias).
double edge_polar_angle(const DimerParams& p);

// Sea border n_x(phi) = sqrt((N K / 2U) (1 + cos phi)) in the number-phase chart.
double separatrix_border_n(const DimerParams& p, double phi);

// Tabulated monotone A(E) with clustering near the stationary energies.
class ActionTable {
  public:
    struct BuildOptions {
        int base_grid = 257;
        double refine_tol = 5e-7 * 4.0 * M_PI;  // absolute, on A
        int max_refine_passes = 8;
        bool parallel = true;
        RadiusConvention radius = RadiusConvention::LargeJ;
    };

    static ActionTable build(const DimerParams& p, const BuildOptions& opt);
    static ActionTable build(const DimerParams& p) { return build(p, BuildOptions{}); }

    double area(double E) const;           // clamped to [0, 4*pi]
    double energy_at_area(double a) const; // inverse on the monotone interpolant
    // Classical oscillation frequency at energy E.  Above the saddle the
    // global A'(E) counts both islands, so the per-orbit frequency doubles.
    double omega(double E) const;
    // Mean spacing h/A'(E) of the merged level ladder (no island doubling);
    // equals the per-level microcanonical shell weight.
    double ladder_omega(double E) const;

    double e_min() const { return e_min_; }
    double e_max() const { return e_max_; }
    std::optional<double> e_saddle() const { return e_saddle_; }
    const DimerParams& params() const { return params_; }
    RadiusConvention radius() const { return radius_; }
    const num::Pchip& interpolant() const { return pchip_; }

  private:
    DimerParams params_;
    RadiusConvention radius_ = RadiusConvention::LargeJ;
    double e_min_ = 0, e_max_ = 0;
    std::optional<double> e_saddle_;
    num::Pchip pchip_;
};

struct WkbLevel {
    double energy = 0;
    double omega = 0;
    int index = 0;
    enum class Region { Sea, Island } region = Region::Sea;
    bool near_separatrix = false;
};

struct WkbSpectrum {
    DimerParams params;
    std::vector<WkbLevel> levels;  // ascending; island levels appear twice
    double nu_x = 0;               // A(E_x)/h
    int sea_count = 0;
    int island_pairs = 0;
};

// Quantize A(E) = (nu + 1/2) h on the sea and each island separately;
// at zero bias island levels are degenerate pairs.  For eps != 0 only the
// sea ladder is produced.
WkbSpectrum wkb_levels(const DimerParams& p, const ActionTable* table = nullptr);

// omega(E) via a guarded centered difference on the interpolant.
double classical_frequency(double E, const DimerParams& p);
double classical_frequency(double E, const ActionTable& table);

// Near-separatrix level estimate E_x + (delta_nu omega_J) / ((1/pi) log(b N/sqrt(u) / |delta_nu|)),
// one substitution of the leading spacing into the logarithm.  log_b <= 0
// selects the frozen fitted value.
double near_separatrix_level(const DimerParams& p, double delta_nu, double log_b = 0.0);

// One-parameter fit of the log-correction scale b against an exact spectrum.
double fit_log_correction_b(const DimerParams& p, std::span<const double> exact_energies);

}  // namespace bjj::wkb
