#include "bjj/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bjj/errors.hpp"

namespace bjj::harness {

double PowerSpectrum::total() const {
    double s = 0;
    for (double d : density) s += d;
    return s * domega;
}

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ConfigError("fft_radix2: size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

FluctuationStats analyze_series(std::span<const double> values, double dt,
                                double transient_fraction) {
    if (values.size() < 1024)
        throw ConfigError("analyze_series: need at least 1024 samples");
    if (dt <= 0) throw ConfigError("analyze_series: dt must be > 0");
    const size_t skip = static_cast<size_t>(values.size() * transient_fraction);
    const size_t avail = values.size() - skip;
    size_t m = 1;
    while (m * 2 <= avail) m *= 2;
    const size_t start = values.size() - m;  // trailing chunk

    FluctuationStats st;
    st.analyzed_samples = static_cast<int>(m);

    double mean = 0;
    for (size_t i = 0; i < m; ++i) mean += values[start + i];
    mean /= static_cast<double>(m);
    st.mean = mean;

    double var = 0;
    for (size_t i = 0; i < m; ++i) {
        const double f = values[start + i] - mean;
        var += f * f;
    }
    var /= static_cast<double>(m);
    st.rms = std::sqrt(var);

    // Hann-windowed periodogram, normalized so the one-sided sum times
    // domega reproduces the variance of a stationary signal
    std::vector<std::complex<double>> buf(m);
    double wsum2 = 0;
    for (size_t i = 0; i < m; ++i) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / m));
        wsum2 += w * w;
        buf[i] = w * (values[start + i] - mean);
    }
    fft_radix2(buf, false);

    const double domega = 2.0 * M_PI / (static_cast<double>(m) * dt);
    st.spectrum.domega = domega;
    const size_t half = m / 2;
    st.spectrum.omega.resize(half);
    st.spectrum.density.resize(half);
    for (size_t k = 1; k <= half; ++k) {
        const double power = std::norm(buf[k]) / (static_cast<double>(m) * wsum2) *
                             (k == half ? 1.0 : 2.0);
        st.spectrum.omega[k - 1] = domega * static_cast<double>(k);
        st.spectrum.density[k - 1] = power / domega;
    }

    double total = 0, centroid = 0, peakv = -1;
    size_t peaki = 0;
    for (size_t k = 0; k < half; ++k) {
        const double pw = st.spectrum.density[k];
        total += pw;
        centroid += pw * st.spectrum.omega[k];
        if (pw > peakv) { peakv = pw; peaki = k; }
    }
    const double floor = 1e-13 * (1.0 + std::abs(mean));
    if (total > 0 && var > floor * floor) {
        st.dominant_frequency = centroid / total;
        st.parseval_ratio = total * domega / var;
        double peak = st.spectrum.omega[peaki];
        if (peaki > 0 && peaki + 1 < half) {
            const double ym = st.spectrum.density[peaki - 1];
            const double y0 = st.spectrum.density[peaki];
            const double yp = st.spectrum.density[peaki + 1];
            const double den = ym - 2 * y0 + yp;
            if (den < 0) peak += 0.5 * (ym - yp) / den * domega;
        }
        st.peak_frequency = peak;
    } else {
        st.dominant_frequency = 0;
        st.peak_frequency = 0;
        st.parseval_ratio = 1.0;
    }
    return st;
}

FluctuationStats analyze_sx(const TimeSeries& ts, double transient_fraction) {
    return analyze_series(ts.sx, ts.dt(), transient_fraction);
}

}  // namespace bjj::harness
