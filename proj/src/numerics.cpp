#include "bjj/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "bjj/errors.hpp"

namespace bjj::num {

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if (fa * fb > 0) throw NumericalError("brent_root: interval does not bracket a root");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc; r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
    }
    throw NumericalError("brent_root: no convergence");
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double a,
                               double b, int n, double xtol) {
    std::vector<double> roots;
    double xl = a, fl = f(a);
    for (int i = 1; i <= n; ++i) {
        const double xr = a + (b - a) * i / n;
        const double fr = f(xr);
        if (fl == 0.0) roots.push_back(xl);
        else if (fl * fr < 0) roots.push_back(brent_root(f, xl, xr, xtol));
        xl = xr; fl = fr;
    }
    if (fl == 0.0) roots.push_back(b);
    return roots;
}

Pchip Pchip::fit(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw NumericalError("Pchip::fit: need at least two points");
    const int n = static_cast<int>(x.size());
    Pchip p;
    p.x_ = std::move(x);
    p.y_ = std::move(y);
    p.d_.assign(n, 0.0);
    std::vector<double> h(n - 1), del(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        h[i] = p.x_[i + 1] - p.x_[i];
        if (h[i] <= 0) throw NumericalError("Pchip::fit: abscissae not strictly increasing");
        del[i] = (p.y_[i + 1] - p.y_[i]) / h[i];
    }
    if (n == 2) {
        p.d_[0] = p.d_[1] = del[0];
        return p;
    }
    for (int i = 1; i < n - 1; ++i) {
        if (del[i - 1] * del[i] <= 0) {
            p.d_[i] = 0.0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1];
            const double w2 = h[i] + 2 * h[i - 1];
            p.d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0) d = 0;
        else if (d0 * d1 <= 0 && std::abs(d) > 3 * std::abs(d0)) d = 3 * d0;
        return d;
    };
    p.d_[0] = edge(h[0], h[1], del[0], del[1]);
    p.d_[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return p;
}

int Pchip::interval(double xq) const {
    const int n = static_cast<int>(x_.size());
    if (xq <= x_.front()) return 0;
    if (xq >= x_.back()) return n - 2;
    int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin()) - 1;
    return std::clamp(i, 0, n - 2);
}

double Pchip::operator()(double xq) const {
    const int i = interval(xq);
    const double h = x_[i + 1] - x_[i], t = (xq - x_[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::derivative(double xq) const {
    const int i = interval(xq);
    const double h = x_[i + 1] - x_[i], t = (xq - x_[i]) / h;
    const double g00 = 6 * t * t - 6 * t;
    const double g10 = 3 * t * t - 4 * t + 1;
    const double g01 = -g00;
    const double g11 = 3 * t * t - 2 * t;
    return (g00 * y_[i] + g01 * y_[i + 1]) / h + g10 * d_[i] + g11 * d_[i + 1];
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) * x * p1 - k * p2) / (k + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                           double b, int level) {
    // Node layout fixed by `level`; abscissae clamped away from the endpoints.
    const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
    const double hstep = 3.0 / (1 << level);
    const int nmax = (1 << level) * 2;
    double sum = 0.0;
    for (int k = -nmax; k <= nmax; ++k) {
        const double t = k * hstep;
        const double u = M_PI_2 * std::sinh(t);
        const double x = std::tanh(u);
        const double w = M_PI_2 * std::cosh(t) / (std::cosh(u) * std::cosh(u));
        if (1.0 - std::abs(x) < 1e-17) continue;
        sum += w * f(mid + c * x);
    }
    return sum * c * hstep;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int n) {
    std::vector<double> xs, ws;
    gauss_legendre(n, xs, ws);
    const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += ws[i] * f(mid + c * xs[i]);
    return sum * c;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw NumericalError("fit_slope: need matching arrays of length >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace bjj::num
