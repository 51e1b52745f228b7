#pragma once

#include <complex>
#include <vector>

namespace bjj::model {

// Real symmetric tridiagonal matrix.
struct Tridiagonal {
    std::vector<double> diag;  // size n
    std::vector<double> off;   // size n-1, off[i] couples i and i+1

    int dim() const { return static_cast<int>(diag.size()); }
    void apply(const std::complex<double>* x, std::complex<double>* y) const;
    void apply(const double* x, double* y) const;
    double norm_inf() const;
};

// Implicit-QL eigensolver with Wilkinson shifts.  Eigenvalues returned
// ascending; when `vectors` is non-null it receives the orthonormal
// eigenvectors column-major (column nu at vectors[nu*n]).  Throws
// NumericalError when a value fails to converge within 50 sweeps.
void tridiag_eigen_ql(std::vector<double> diag, std::vector<double> off,
                      std::vector<double>& values, std::vector<double>* vectors);

}  // namespace bjj::model
