#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bjj/model.hpp"
#include "bjj/params.hpp"
#include "bjj/wkb.hpp"

namespace bjj::wigner {

using cdouble = std::complex<double>;

// Wigner 3j symbol by the Racah sum with log-factorials; the alternating
// terms are accumulated smallest-first to limit cancellation.  Quantum
// numbers may be half-integral.  Selection-rule failures return 0; inputs
// that are not half-integers, or with |m| > j, are rejected.
double wigner_3j(double j1, double j2, double j3, double m1, double m2, double m3);

struct SphereGrid {
    enum class MuRule { UniformMidpoint, GaussLegendre };
    MuRule rule = MuRule::UniformMidpoint;
    std::vector<double> phi;   // uniform midpoints on (-pi, pi]
    std::vector<double> mu;    // cos(theta) nodes
    std::vector<double> w_mu;  // quadrature weights for the mu nodes

    int n_phi() const { return static_cast<int>(phi.size()); }
    int n_mu() const { return static_cast<int>(mu.size()); }
    double phi_cell() const { return 2.0 * M_PI / n_phi(); }

    static SphereGrid uniform(int n_phi, int n_mu);
    // exact for spherical polynomials up to degree 2*n_mu - 1 in mu
    static SphereGrid gauss(int n_phi, int n_mu);
};

// Dense multipole operators T^{lm} for one spin; each is a single shifted
// diagonal.  Intended for small j (orthonormality checks, tests).
class MultipoleBasis {
  public:
    struct Diagonal {
        int l = 0, m = 0;
        int row0 = 0;                // first row index carrying a value
        std::vector<double> values;  // entry at (row0+i, row0+i-m)
    };

    static MultipoleBasis build(int two_j, bool parallel = true);
    int two_j() const { return two_j_; }
    const Diagonal& at(int l, int m) const;
    // trace[(T^{l1 m1})^dag T^{l2 m2}]
    double pair_trace(int l1, int m1, int l2, int m2) const;

  private:
    int two_j_ = 0;
    std::vector<Diagonal> diags_;
};

// Real sphere function representing a state or observable, sampled on a
// rectangular (phi, cos theta) mesh, plus its multipole coefficients.
struct WignerField {
    int two_j = 0;
    SphereGrid grid;
    std::vector<double> values;   // [i_mu * n_phi + i_phi]
    std::vector<cdouble> coeff;   // C_{lm} packed at l*(l+1)+m
    double hermiticity_residual = 0;  // max |C_{l,-m} - (-1)^m conj(C_{lm})|

    int dim() const { return two_j + 1; }
    double planck_cell() const { return 4.0 * M_PI / dim(); }
    double at(int i_mu, int i_phi) const { return values[static_cast<size_t>(i_mu) * grid.n_phi() + i_phi]; }

    double integral() const;                               // int f dOmega/h
    double product_integral(const WignerField& b) const;   // int f g dOmega/h
};

inline constexpr int kMaxTransformN = 200;  // full l <= 2j transform gate

// Phase-space representation of a pure state (density matrix |psi><psi|).
WignerField state_to_wigner(const model::QuantumState& state, const SphereGrid& grid);

// Same map applied to an arbitrary Hermitian matrix in the m-basis
// (row-major dim x dim): observables and mixtures alike.
WignerField hermitian_to_wigner(std::span<const cdouble> matrix, int two_j,
                                const SphereGrid& grid);

// |j, j> has only m = 0 multipoles; closed-form coefficient per l.
WignerField coherent_wigner_closed_form(int two_j, const SphereGrid& grid);

// Closed-form phase-space densities in the cylindrical (n, phi) chart with
// measure dphi dn / (2 pi).  Used for ensemble sampling and as LDOS kernels.
struct PhaseSpaceApprox {
    enum class Kind { EquatorialCoherent, FockDelta, Microcanonical };
    Kind kind = Kind::EquatorialCoherent;
    // coherent packet; isotropic minimal widths, sigma_phi * sigma_n = 1/2
    double phi_center = 0, n_center = 0;
    double sigma_phi = 0;  // 1/sqrt(dim)
    double sigma_n = 0;    // sqrt(dim)/2
    // delta ring
    double fock_n = 0;
    // microcanonical shell
    double energy = 0, omega_e = 0;

    double coherent_density(double n, double phi) const;  // normalized wrt dphi dn / 2pi
    // omega(E) * A'(E) / h; equals 1 for a correctly normalized shell
    double microcanonical_norm(const wkb::ActionTable& table) const;
};

PhaseSpaceApprox coherent_approximation(const DimerParams& p, double phi0, double n0 = 0.0);
PhaseSpaceApprox fock_approximation(const DimerParams& p, double n0);
PhaseSpaceApprox microcanonical_approximation(const DimerParams& p, double energy,
                                              const wkb::ActionTable& table);

}  // namespace bjj::wigner
