#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bjj/analytics.hpp"
#include "bjj/ensemble.hpp"
#include "bjj/model.hpp"
#include "bjj/params.hpp"
#include "bjj/series.hpp"

namespace bjj::harness {

struct RunConfig {
    DimerParams params;
    model::Preparation prep = model::Preparation::zero();
    double horizon = 0;   // tau units; 0 = 200 periods of the slow frequency
    double dt = 0;        // tau units; 0 = Nyquist-guarded default
    std::size_t ensemble_size = 10000;
    std::uint64_t seed = 12345;
    std::string out_dir = "out";
    int grid = 512;       // phase-space mesh per axis
    int threads = 0;      // 0 = leave OpenMP defaults alone

    // Fastest beat the series can contain (twice the top plasma frequency).
    double max_expected_frequency() const;
    // Frequency whose period sets the averaging horizon.
    double slow_frequency() const;
    // Fill horizon/dt defaults, enforce the Nyquist guard and the
    // >= 20 slow periods coverage rule; throws ConfigError.
    void finalize();
};

void apply_threads(int threads);

struct QuantumRunResult {
    TimeSeries series;
    analytics::LdosProfile ldos;
    FluctuationStats stats;
    std::vector<std::string> files;
};
QuantumRunResult run_quantum(const RunConfig& cfg, bool write_files = true);

struct EnsembleRunResult {
    TimeSeries series;
    ensemble::TrajectoryBundle bundle;
    FluctuationStats stats;
    std::vector<std::string> files;
};
EnsembleRunResult run_ensemble(const RunConfig& cfg, bool write_files = true,
                               bool histograms = false);

struct SweepConfig {
    std::vector<int> particle_counts;
    std::vector<double> u_over_n;
    std::vector<model::Preparation> preps;
    double K = 1.0;
    std::string out_dir = "out";
    std::string label = "sweep";
    std::uint64_t seed = 12345;
};

struct SweepRow {
    int N = 0;
    double u = 0, u_over_n = 0;
    std::string prep;
    bool ok = false;
    std::string message;
    double mean_sx = 0, rms_sx = 0;
    double dominant_frequency = 0, peak_frequency = 0;
    double participation = 0, energy_width = 0;
};

// Quantum run per grid point; failures are recorded and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, bool write_files = true);

// Data sets behind the batch figure presets (1..8).  Returns files written.
std::vector<std::string> run_figure(int index, const std::string& out_dir,
                                    bool quick = false);

// helpers shared with the acceptance suite
std::vector<double> tau_grid(double horizon, double dt);
TimeSeries quantum_series(const model::QuantumState& state, const model::Spectrum& spec,
                          const std::vector<double>& tau);

}  // namespace bjj::harness
