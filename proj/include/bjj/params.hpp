#pragma once

#include <cmath>
#include <string>

namespace bjj {

enum class Regime { Rabi, Josephson, Fock };

// Physical parameters of the two-site Bose-Hubbard dimer plus the derived
// constants everything downstream keeps asking for.  Energies are stored in
// the units they were given in; public time arguments are always the
// dimensionless tau = K*t, so phases use E/K internally.
struct DimerParams {
    int N = 0;        // particle count, >= 1
    double U = 0.0;   // on-site interaction
    double K = 1.0;   // hopping amplitude, > 0
    double eps = 0.0; // bias between the two site energies

    static DimerParams physical(int N, double U, double K, double eps = 0.0);
    // u = N*U/K, eps_scaled = eps/K
    static DimerParams scaled(int N, double u, double eps_scaled = 0.0, double K = 1.0);

    void validate() const;  // throws ConfigError

    int dim() const { return N + 1; }
    double spin_j() const { return 0.5 * N; }
    double coupling_u() const { return N * U / K; }
    double bias_scaled() const { return eps / K; }
    // Planck cell in steradians; dim() * planck_cell() == 4*pi identically.
    double planck_cell() const { return 4.0 * M_PI / dim(); }

    // Stationary energies of the classical Hamiltonian at zero bias.
    double ground_energy() const { return -0.5 * N * K; }
    double separatrix_energy() const { return 0.5 * N * K; }
    double top_energy() const {
        const double u = coupling_u();
        return u >= 1.0 ? 0.25 * (u + 1.0 / u) * N * K : 0.5 * N * K;
    }

    double omega_rabi() const { return K; }
    double omega_josephson() const { return std::sqrt(N * U * K); }
    // plasma frequencies for weak interaction; omega_minus is NaN once N*U > K
    double omega_plus() const { return std::sqrt((K + N * U) * K); }
    double omega_minus() const { return std::sqrt((K - N * U) * K); }
    double omega_top() const { return N * U; }
    // level spacing in the separatrix region, defined for u > 1
    double omega_separatrix() const {
        return omega_josephson() / std::log(N / std::sqrt(coupling_u()));
    }

    double charging_energy() const { return U; }
    double josephson_energy() const { return 0.5 * K * N; }

    Regime regime() const;
    std::string describe() const;

    bool operator==(const DimerParams&) const = default;
};

}  // namespace bjj
