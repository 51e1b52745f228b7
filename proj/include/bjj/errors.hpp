#pragma once

#include <stdexcept>
#include <string>

namespace bjj {

// Bad inputs: invalid parameters, malformed configuration, domain violations.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure failed to converge or produced an inconsistent
// result (non-monotone interpolant, root bracket lost, ...).  Exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bjj
