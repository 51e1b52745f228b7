#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bjj/ldos.hpp"
#include "bjj/params.hpp"
#include "bjj/tridiag.hpp"

namespace bjj::model {

using cdouble = std::complex<double>;

// H = U*Jz^2 - eps*Jz - K*Jx in the Jz eigenbasis m = -j..+j (c-number
// terms dropped).  Tridiagonal: diag U*m^2 - eps*m, off -K/2*sqrt((j-m)(j+m+1)).
Tridiagonal build_hamiltonian(const DimerParams& p);

struct Spectrum {
    DimerParams params;
    std::vector<double> energies;  // ascending
    std::vector<double> vectors;   // column-major, column nu = eigenvector nu
    std::vector<int> parity;       // +1 even / -1 odd under m -> -m; empty if eps != 0

    int dim() const { return static_cast<int>(energies.size()); }
    std::span<const double> eigenvector(int nu) const {
        return {vectors.data() + static_cast<size_t>(nu) * dim(), static_cast<size_t>(dim())};
    }
    bool has_parity() const { return !parity.empty(); }
};

// At eps = 0 the Hamiltonian commutes with the m -> -m reflection; the solve
// is done per parity block, which pins the eigenvectors of the nearly
// degenerate island doublets to definite parity.
Spectrum diagonalize(const DimerParams& p);
Spectrum diagonalize(const Tridiagonal& h, const DimerParams& p);

struct Preparation {
    enum class Kind { TwinFock, Fock, SCS, Zero, Pi, Edge };
    Kind kind = Kind::Zero;
    int fock_n = 0;           // Fock only
    double theta = 0, phi = 0;  // SCS only

    static Preparation twin_fock() { return {Kind::TwinFock, 0, 0, 0}; }
    static Preparation fock(int n) { return {Kind::Fock, n, 0, 0}; }
    static Preparation scs(double theta, double phi) { return {Kind::SCS, 0, theta, phi}; }
    static Preparation zero() { return {Kind::Zero, 0, 0, 0}; }
    static Preparation pi() { return {Kind::Pi, 0, 0, 0}; }
    static Preparation edge() { return {Kind::Edge, 0, 0, 0}; }
    static Preparation parse(const std::string& text);  // "zero", "pi", "edge", "twinfock", "fock:3", "scs:1.2,0.5"
    std::string name() const;
};

struct QuantumState {
    DimerParams params;
    std::vector<cdouble> amps;  // m = -j..+j

    int dim() const { return static_cast<int>(amps.size()); }
    double norm() const;
};

// Spin coherent states use amplitudes
//   psi_m = sqrt(C(2j, j+m)) cos(theta/2)^{j+m} sin(theta/2)^{j-m} e^{-i(j-m)phi}
// (binomials accumulated in log space), so SCS(pi/2, 0) is real positive.
// With this gauge the Bloch vector of SCS(theta, phi) sits at azimuth -phi.
QuantumState prepare(const DimerParams& p, const Preparation& prep);

// psi(tau) = sum_nu e^{-i (E_nu/K) tau} <E_nu|psi> |E_nu>,  tau = K*t
QuantumState evolve(const QuantumState& state, const Spectrum& spec, double tau);

struct BlochVector {
    double x = 0, y = 0, z = 0;
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double occupation_diff(const DimerParams& p) const { return p.N * z; }
    double relative_phase() const { return std::atan2(y, x); }
    double one_body_purity() const { return 0.5 * (1.0 + x * x + y * y + z * z); }
    double fringe_visibility() const { return std::sqrt(x * x + y * y); }
};

BlochVector bloch_vector(const QuantumState& state);          // S_i = (2/N) <J_i>
std::vector<double> occupation_distribution(const QuantumState& state);
analytics::LdosProfile ldos_quantum(const QuantumState& state, const Spectrum& spec);

double state_parity_expectation(const QuantumState& state);   // <psi| (m -> -m) |psi>

// Time series over a tau grid, evaluated in the eigenbasis.  OpenMP over
// sample times; `parallel = false` is the serial reference, bit-identical
// to the parallel kernel.
struct BlochSeries {
    std::vector<double> tau;
    std::vector<double> sx, sy, sz;
    std::vector<double> norm_error;     // | ||psi|| - 1 |
    std::vector<double> energy, energy_sq;  // <H>, <H^2> at each sample
};
BlochSeries evolve_bloch_series(const QuantumState& state, const Spectrum& spec,
                                std::span<const double> tau, bool parallel = true);

// Matrix elements A = V^T Sx V of the scaled spin component Sx = (2/N) Jx.
// Row-major dim x dim; used by the exact fluctuation-RMS evaluation.
std::vector<double> sx_matrix_elements(const Spectrum& spec);

}  // namespace bjj::model
