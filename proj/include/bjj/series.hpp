#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bjj::harness {

enum class Provenance { Quantum, Ensemble };

struct TimeSeries {
    Provenance provenance = Provenance::Quantum;
    std::vector<double> tau;
    std::vector<double> sx, sy, sz, visibility, purity;

    double dt() const { return tau.size() > 1 ? tau[1] - tau[0] : 0.0; }
    std::size_t size() const { return tau.size(); }
};

struct PowerSpectrum {
    std::vector<double> omega;    // > 0 bins
    std::vector<double> density;  // one-sided, sum(density)*domega ~ variance
    double domega = 0;
    double total() const;
};

struct FluctuationStats {
    double mean = 0;
    double rms = 0;  // time-domain, after transient removal
    PowerSpectrum spectrum;
    double dominant_frequency = 0;  // power-weighted centroid over omega > 0
    double peak_frequency = 0;      // interpolated argmax bin
    double parseval_ratio = 1.0;    // spectral power / time-domain variance
    int analyzed_samples = 0;
};

// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

// Windowed periodogram of a uniformly sampled series.  The leading
// `transient_fraction` is discarded, then the trailing power-of-two chunk is
// Hann-windowed.  Requires at least 1024 input samples.
FluctuationStats analyze_series(std::span<const double> values, double dt,
                                double transient_fraction = 0.25);
FluctuationStats analyze_sx(const TimeSeries& ts, double transient_fraction = 0.25);

}  // namespace bjj::harness
