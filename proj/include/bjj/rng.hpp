#pragma once

#include <cmath>
#include <cstdint>

namespace bjj::rng {

// splitmix64: cheap counter-style generator used to derive independent
// per-point streams from one master seed.  Every stream is a pure function
// of (master seed, index), so ensembles are reproducible for any thread
// count or scheduling.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in (0, 1): never returns 0 so logs are safe
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
};

inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    SplitMix64 s(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return s.next();
}

// Box-Muller normal deviates on top of SplitMix64.
struct Stream {
    SplitMix64 gen;
    bool have_spare = false;
    double spare = 0;
    explicit Stream(std::uint64_t seed) : gen(seed) {}
    double uniform() { return gen.uniform(); }
    double normal() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = gen.uniform(), u2 = gen.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

}  // namespace bjj::rng
