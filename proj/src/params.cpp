#include "bjj/params.hpp"

#include <sstream>

#include "bjj/errors.hpp"

namespace bjj {

DimerParams DimerParams::physical(int N, double U, double K, double eps) {
    DimerParams p{N, U, K, eps};
    p.validate();
    return p;
}

DimerParams DimerParams::scaled(int N, double u, double eps_scaled, double K) {
    if (N < 1) throw ConfigError("DimerParams: N must be >= 1");
    if (K <= 0) throw ConfigError("DimerParams: K must be > 0");
    DimerParams p{N, u * K / N, K, eps_scaled * K};
    p.validate();
    return p;
}

void DimerParams::validate() const {
    if (N < 1) throw ConfigError("DimerParams: N must be >= 1 (u = NU/K undefined otherwise)");
    if (K <= 0) throw ConfigError("DimerParams: K must be > 0");
    if (!std::isfinite(U) || !std::isfinite(K) || !std::isfinite(eps))
        throw ConfigError("DimerParams: parameters must be finite");
}

Regime DimerParams::regime() const {
    const double u = coupling_u();
    if (u < 1.0) return Regime::Rabi;
    if (u <= static_cast<double>(N) * N) return Regime::Josephson;
    return Regime::Fock;
}

std::string DimerParams::describe() const {
    std::ostringstream os;
    os << "N=" << N << " U=" << U << " K=" << K << " eps=" << eps
       << " (u=" << coupling_u() << ")";
    return os.str();
}

}  // namespace bjj
