#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bjj::num {

// Brent root finder on a bracketing interval [a, b] with f(a)*f(b) <= 0.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-14, int max_iter = 200);

// Locate all sign changes of f on [a, b] with a uniform scan of n cells,
// then polish each with Brent.  Tangential (non-crossing) roots are missed.
std::vector<double> scan_roots(const std::function<double(double)>& f, double a,
                               double b, int n, double xtol = 1e-13);

// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes).  Preserves
// monotonicity of the data, which makes the inverse well defined.
class Pchip {
  public:
    Pchip() = default;
    static Pchip fit(std::vector<double> x, std::vector<double> y);
    double operator()(double xq) const;
    double derivative(double xq) const;
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

  private:
    std::vector<double> x_, y_, d_;
    int interval(double xq) const;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Fixed-level tanh-sinh quadrature on [a, b].  Robust for integrands with
// mild endpoint singularities (sqrt-type kinks).
double integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                           double b, int level = 8);

// Composite Gauss-Legendre on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int n);

// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

// Pairwise (tree) summation in index order: the result depends only on the
// content of the array, never on thread count.
double pairwise_sum(std::span<const double> v);

}  // namespace bjj::num
