#pragma once

#include <string>

namespace bjj::constants {

// Calibration constants fitted once against exact spectra/series and frozen.
// data/fitted_constants.json overrides the compiled defaults when present
// (or point BJJ_CONSTANTS_FILE at a copy); sidecars record which was used.
struct Fitted {
    int version = 1;
    // omega_osc ~ prefactor * U * sqrt(N) for u/N >= 1 (fitted at N = 1000)
    double phase_diffusion_prefactor = 1.0;
    // scale inside the near-separatrix log spacing (fitted at N = 100, u = 4)
    double separatrix_log_b = 19.20879;

    std::string source;  // file path or "builtin"
};

const Fitted& fitted();

// Explicit load for tools; throws ConfigError on malformed files.
Fitted load_file(const std::string& path);
void write_file(const std::string& path, const Fitted& values);

}  // namespace bjj::constants
