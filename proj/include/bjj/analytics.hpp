#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bjj/ldos.hpp"
#include "bjj/model.hpp"
#include "bjj/params.hpp"
#include "bjj/wkb.hpp"

namespace bjj::analytics {

// ---- special-function kernels ------------------------------------------

// Modified Bessel functions of the first/second kind, order zero.
// bessel_i0 accepts any real argument (even function); bessel_k0 requires
// x > 0.  The *_scaled variants carry e^{-x} / e^{x} factors and the log
// forms stay finite far beyond the overflow point of the plain values.
double bessel_i0(double x);
double bessel_k0(double x);
double bessel_i0_scaled(double x);  // e^{-|x|} I0(x)
double bessel_k0_scaled(double x);  // e^{x} K0(x)
double log_bessel_i0(double x);
double log_bessel_k0(double x);

// int_0^{s_max} exp(-z cosh s) ds: K0(z) truncated by a finite phase space.
double capped_bessel_k0(double z, double s_max);

// ---- semiclassical line shapes -------------------------------------------

// Envelope of the level-weight distribution of a preparation, evaluated at
// the given level energies (exact or WKB ladder), with odd-parity levels
// zeroed for the mirror-symmetric preparations and the result renormalized.
// Supported kinds: Zero, Pi, Edge, TwinFock; requires eps = 0.
LdosProfile ldos_semiclassical(const model::Preparation& prep, const DimerParams& p,
                               std::span<const double> energies,
                               std::span<const int> parity,
                               const wkb::ActionTable& table);
LdosProfile ldos_semiclassical(const model::Preparation& prep, const model::Spectrum& spec,
                               const wkb::ActionTable& table);

// ---- rough participation / frequency estimates ----------------------------

struct ParticipationEstimate {
    double participation = 0;       // M
    double semiclassical_ratio = 0; // sqrt(u/N)
    bool within_validity = true;    // u > 1 and u/N < 1
};
// Pi: M ~ log(N/u) sqrt(u);  Edge: M ~ log(N/u) sqrt(N).
ParticipationEstimate participation_estimate(const model::Preparation& prep,
                                             const DimerParams& p);

struct FrequencyEstimate {
    double intrinsic = 0;  // characteristic phase-space frequency
    double observed = 0;   // doubled: Sx couples only levels of equal parity
    bool fock_branch = false;
};
// Zero: omega_J;  Pi: [log(N/u)]^-1 omega_J;  Edge: twice that;
// u/N >= 1: fitted prefactor times U sqrt(N) for any coherent preparation.
FrequencyEstimate frequency_estimate(const model::Preparation& prep, const DimerParams& p);

// ---- long-time phase distributions ----------------------------------------

struct PhaseDistribution {
    DimerParams params;
    std::vector<double> phi;  // uniform grid on (-pi, pi]
    std::vector<double> pdf;  // normalized, int P dphi = 1

    double mean_cos() const;  // int cos(phi) P(phi) dphi
    double separatrix_border_n(double phi) const;
};
PhaseDistribution phase_distribution(const model::Preparation& prep, const DimerParams& p,
                                     int grid = 4097);

struct LongTimeAverage {
    double closed_form = 0;
    double quadrature = 0;  // int cos(phi) P(phi) dphi
};
// Zero: exp(-u/N);  Pi: -1 - 4/log((u/N)/32), refused for u/N > 1/2;
// TwinFock: 1/3.
LongTimeAverage long_time_average(const model::Preparation& prep, const DimerParams& p);

// ---- fluctuations ---------------------------------------------------------

// RMS of quantum temporal fluctuations: classical fluctuation power
// suppressed by the participation number, sqrt(area / M).
double rms_prediction(const LdosProfile& profile, double classical_area);

struct ExactFluctuation {
    double time_average = 0;   // sum_nu p_nu A_nu,nu
    double second_moment = 0;  // sum_{nu != mu} p_nu p_mu |A_nu,mu|^2
    double rms = 0;            // sqrt(second_moment)
};
// Long-time statistics of <Sx>_t from the eigenbasis expansion, assuming a
// non-degenerate spectrum with incommensurate gaps.
ExactFluctuation fluctuation_rms_exact(const model::Spectrum& spec,
                                       const model::QuantumState& state);

// t_revival = 2 pi / (dE/dnu), centered difference on the level ladder;
// returned in units of 1/K (dimensionless tau).
double revival_time(const DimerParams& p, std::span<const double> levels, int nu);

}  // namespace bjj::analytics
