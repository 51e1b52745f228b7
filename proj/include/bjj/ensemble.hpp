#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bjj/model.hpp"
#include "bjj/params.hpp"

namespace bjj::ensemble {

// Cloud of unit Bloch vectors sampled from the phase-space density of a
// preparation.  Points are pure functions of (seed, index): the cloud is
// identical for any thread count.
struct PhasePointCloud {
    DimerParams params;
    model::Preparation prep;
    std::uint64_t seed = 0;
    std::vector<double> sx, sy, sz;

    std::size_t size() const { return sx.size(); }
};

PhasePointCloud sample_cloud(const model::Preparation& prep, const DimerParams& p,
                             std::size_t size, std::uint64_t seed);

struct PropagateOptions {
    double dt_init = 0.0;        // 0: automatic, 0.25/(1+u+|eps_s|)
    double energy_tol = 2e-8;    // per-trajectory |Delta h| on h = 2H/(NK), i.e. 1e-8*NK
    bool record_histograms = false;
    int phi_bins = 128;
    bool parallel = true;
};

// Classical Bloch flow in rescaled time tau = K t, derived from the spin
// Poisson brackets of H = U Jz^2 - eps Jz - K Jx:
//   dSx/dtau = ( eps_s - u Sz ) Sy
//   dSy/dtau = ( 1 + u Sx ) Sz - eps_s Sx
//   dSz/dtau = -Sy
// The bias terms are the precession of S about the z-axis that the
// eps Jz term generates; they vanish at eps = 0.
struct TrajectoryBundle {
    DimerParams params;
    model::Preparation prep;
    std::uint64_t seed = 0;
    std::size_t size = 0;
    double dt = 0;                 // accepted RK4 step
    double max_energy_drift = 0;   // units of N*K
    double max_norm_error = 0;

    std::vector<double> tau;
    std::vector<double> mean_sx, mean_sy, mean_sz;   // plain ensemble means
    // normalized histograms at every sample time (empty unless recorded)
    std::vector<std::vector<double>> hist_n;    // dim bins at n = -j..+j
    std::vector<std::vector<double>> hist_phi;  // phi_bins over (-pi, pi]
};

TrajectoryBundle propagate(const PhasePointCloud& cloud, std::span<const double> tau,
                           const PropagateOptions& opt = {});

// Endpoint cloud after evolving to a single time.
PhasePointCloud propagate_to(const PhasePointCloud& cloud, double tau,
                             const PropagateOptions& opt = {});

// Observable series comparable with the quantum Bloch vector: the means are
// rescaled by sqrt(j(j+1))/j, the radius mismatch between the unit-sphere
// points and the exact spin length.
struct EnsembleSeries {
    std::vector<double> tau, sx, sy, sz, visibility, purity;
};
EnsembleSeries reduce_observables(const TrajectoryBundle& bundle);

}  // namespace bjj::ensemble
