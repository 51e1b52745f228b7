#include "bjj/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bjj/errors.hpp"

namespace bjj::model {

void Tridiagonal::apply(const std::complex<double>* x, std::complex<double>* y) const {
    const int n = dim();
    for (int i = 0; i < n; ++i) {
        std::complex<double> acc = diag[i] * x[i];
        if (i > 0) acc += off[i - 1] * x[i - 1];
        if (i + 1 < n) acc += off[i] * x[i + 1];
        y[i] = acc;
    }
}

void Tridiagonal::apply(const double* x, double* y) const {
    const int n = dim();
    for (int i = 0; i < n; ++i) {
        double acc = diag[i] * x[i];
        if (i > 0) acc += off[i - 1] * x[i - 1];
        if (i + 1 < n) acc += off[i] * x[i + 1];
        y[i] = acc;
    }
}

double Tridiagonal::norm_inf() const {
    const int n = dim();
    double m = 0;
    for (int i = 0; i < n; ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) row += std::abs(off[i - 1]);
        if (i + 1 < n) row += std::abs(off[i]);
        m = std::max(m, row);
    }
    return m;
}

namespace {
double hypot2(double a, double b) { return std::hypot(a, b); }
}

void tridiag_eigen_ql(std::vector<double> d, std::vector<double> e,
                      std::vector<double>& values, std::vector<double>* vectors) {
    const int n = static_cast<int>(d.size());
    if (n == 0) throw NumericalError("tridiag_eigen_ql: empty matrix");
    if (static_cast<int>(e.size()) != std::max(0, n - 1))
        throw NumericalError("tridiag_eigen_ql: off-diagonal size mismatch");

    std::vector<double> z_unused;
    std::vector<double>& z = vectors ? *vectors : z_unused;
    if (vectors) {
        z.assign(static_cast<size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) z[static_cast<size_t>(i) * n + i] = 1.0;
    }

    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) {
                    std::ostringstream os;
                    os << "tridiag_eigen_ql: eigenvalue " << l << " of " << n
                       << " failed to converge after " << iter << " iterations";
                    throw NumericalError(os.str());
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (vectors) {
                        double* zi = z.data();
                        for (int k = 0; k < n; ++k) {
                            f = zi[static_cast<size_t>(i + 1) * n + k];
                            const double zk = zi[static_cast<size_t>(i) * n + k];
                            zi[static_cast<size_t>(i + 1) * n + k] = s * zk + c * f;
                            zi[static_cast<size_t>(i) * n + k] = c * zk - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // sort ascending, carrying columns along
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    values.resize(n);
    for (int i = 0; i < n; ++i) values[i] = d[order[i]];
    if (vectors) {
        std::vector<double> sorted(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            std::copy_n(z.begin() + static_cast<size_t>(order[i]) * n, n,
                        sorted.begin() + static_cast<size_t>(i) * n);
        z.swap(sorted);
    }
}

}  // namespace bjj::model
