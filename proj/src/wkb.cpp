#include "bjj/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bjj/constants.hpp"
#include "bjj/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bjj::wkb {

double classical_hamiltonian(double theta, double phi, const DimerParams& p) {
    const double u = p.coupling_u(), es = p.bias_scaled();
    const double c = std::cos(theta), s = std::sin(theta);
    return 0.5 * p.N * p.K * (0.5 * u * c * c - es * c - s * std::cos(phi));
}

double number_phase_hamiltonian(double n, double phi, const DimerParams& p) {
    const double half = 0.5 * p.N;
    if (std::abs(n) > half)
        throw ConfigError("number_phase_hamiltonian: |n| must be <= N/2");
    return p.U * n * n - p.eps * n - p.K * std::sqrt(half * half - n * n) * std::cos(phi);
}

double spin_radius(const DimerParams& p, RadiusConvention rc) {
    const double j = p.spin_j();
    switch (rc) {
        case RadiusConvention::LargeJ: return j;
        case RadiusConvention::Exact: return std::sqrt(j * (j + 1.0));
        case RadiusConvention::HalfInteger: return j + 0.5;
    }
    return j;
}

double PhasePoint::n(const DimerParams& p, RadiusConvention rc) const {
    return spin_radius(p, rc) * std::cos(theta);
}

PhasePoint PhasePoint::from_number_phase(double n, double phi, const DimerParams& p,
                                         RadiusConvention rc) {
    const double r = spin_radius(p, rc);
    if (std::abs(n) > r) throw ConfigError("PhasePoint: |n| exceeds the spin radius");
    return {std::acos(n / r), phi};
}

double section_f(double theta, double u, double eps_s) {
    const double c = std::cos(theta), s = std::sin(theta);
    return 0.5 * u * c * c - eps_s * c - s;
}

double section_df(double theta, double u, double eps_s) {
    return -0.5 * u * std::sin(2 * theta) + eps_s * std::sin(theta) - std::cos(theta);
}

double section_ddf(double theta, double u, double eps_s) {
    return -u * std::cos(2 * theta) + eps_s * std::cos(theta) + std::sin(theta);
}

double section_energy(double theta_signed, const DimerParams& p) {
    return 0.5 * p.N * p.K * section_f(theta_signed, p.coupling_u(), p.bias_scaled());
}

double critical_bias(double u) {
    if (u <= 1.0)
        throw ConfigError("critical_bias: no separatrix for u <= 1");
    return std::pow(std::cbrt(u * u) - 1.0, 1.5);
}

namespace {

// Classical geometry with the spin length made explicit.  The paper-facing
// surface uses radius N/2; quantization is done with j + 1/2, which renders
// the non-interacting ladder exact and pins the island tops.
struct Geometry {
    double u;      // 2 R U / K
    double es;     // bias / K (radius independent)
    double scale;  // R K: energy = scale * f(theta)

    static Geometry make(const DimerParams& p, RadiusConvention rc) {
        const double r = spin_radius(p, rc);
        return {2.0 * r * p.U / p.K, p.bias_scaled(), r * p.K};
    }
};

struct GeomFixedPoints {
    std::vector<FixedPoint> points;
    bool has_separatrix = false;
    const FixedPoint* minimum = nullptr;
    const FixedPoint* saddle = nullptr;
    std::vector<const FixedPoint*> maxima;
    double e_min = 0, e_max = 0;
};

GeomFixedPoints find_fixed_points_geom(const Geometry& g) {
    GeomFixedPoints out;
    auto df = [&](double th) { return section_df(th, g.u, g.es); };
    auto roots = num::scan_roots(df, -M_PI, M_PI, 8192, 1e-14);
    if (roots.size() >= 2 && std::abs((roots.back() - roots.front()) - 2 * M_PI) < 1e-9)
        roots.pop_back();
    if (roots.empty()) throw NumericalError("find_fixed_points: no stationary points found");
    for (double th : roots) {
        FixedPoint fp;
        fp.theta_signed = th;
        fp.energy = g.scale * section_f(th, g.u, g.es);
        const double curv = section_ddf(th, g.u, g.es);
        const bool phi_zero = th > 0;  // transverse phi-curvature is +sin(theta) at phi = 0
        if (curv > 0)
            fp.type = phi_zero ? FixedPoint::Type::Minimum : FixedPoint::Type::Saddle;
        else
            fp.type = phi_zero ? FixedPoint::Type::Saddle : FixedPoint::Type::Maximum;
        out.points.push_back(fp);
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.theta_signed < b.theta_signed; });
    for (const auto& fp : out.points) {
        switch (fp.type) {
            case FixedPoint::Type::Minimum:
                if (!out.minimum || fp.energy < out.minimum->energy) out.minimum = &fp;
                break;
            case FixedPoint::Type::Saddle: out.saddle = &fp; break;
            case FixedPoint::Type::Maximum: out.maxima.push_back(&fp); break;
        }
    }
    if (!out.minimum) throw NumericalError("find_fixed_points: minimum not found");
    out.has_separatrix = (out.saddle != nullptr && out.maxima.size() == 2);
    out.e_min = out.minimum->energy;
    out.e_max = out.minimum->energy;
    for (const auto& fp : out.points) out.e_max = std::max(out.e_max, fp.energy);
    return out;
}

}  // namespace

FixedPointSet find_fixed_points(const DimerParams& p) {
    p.validate();
    const double u = p.coupling_u();
    const auto g = Geometry::make(p, RadiusConvention::LargeJ);
    const auto gf = find_fixed_points_geom(g);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    FixedPointSet out;
    out.points = gf.points;
    out.has_separatrix = gf.has_separatrix;
    out.theta_minus = gf.minimum->theta_signed;
    out.E_minus = gf.minimum->energy;
    out.theta_x = out.theta_1 = out.theta_2 = out.theta_1p = out.theta_2p = nan;
    out.E_x = out.E_plus = nan;
    out.s_x = out.s_1p = out.A_c = nan;
    out.global_min_energy = gf.e_min;
    out.global_max_energy = gf.e_max;

    if (gf.has_separatrix) {
        out.theta_x = gf.saddle->theta_signed;
        out.E_x = gf.saddle->energy;
        auto maxima = gf.maxima;
        std::sort(maxima.begin(), maxima.end(), [](const FixedPoint* a, const FixedPoint* b) {
            return a->theta_signed > b->theta_signed;
        });
        out.theta_1 = maxima[0]->theta_signed;
        out.theta_2 = maxima[1]->theta_signed;
        out.E_plus = std::max(maxima[0]->energy, maxima[1]->energy);

        // island borders: the non-saddle crossings of f = f(theta_x)
        const double fx = section_f(out.theta_x, u, g.es);
        auto fdiff = [&](double th) { return section_f(th, u, g.es) - fx; };
        auto border = num::scan_roots(fdiff, -M_PI, M_PI, 8192, 1e-14);
        std::erase_if(border, [&](double th) { return std::abs(th - out.theta_x) < 1e-5; });
        if (border.size() >= 2 && std::abs((border.back() - border.front()) - 2 * M_PI) < 1e-9)
            border.pop_back();
        auto circ = [](double a, double b) {
            const double d = std::abs(a - b);
            return std::min(d, 2 * M_PI - d);
        };
        if (border.size() == 2) {
            const bool first_closer = circ(border[0], out.theta_1) <= circ(border[1], out.theta_1);
            out.theta_1p = first_closer ? border[0] : border[1];
            out.theta_2p = first_closer ? border[1] : border[0];
        }
    } else if (gf.maxima.size() == 1) {
        out.E_plus = gf.maxima[0]->energy;
        out.theta_1 = gf.maxima[0]->theta_signed;
    }

    if (u > 1.0) {
        out.s_x = std::sqrt(1.0 - std::pow(u, -2.0 / 3.0));
        out.s_1p = 4 * out.s_x * out.s_x * out.s_x - 3 * out.s_x;
        out.A_c = 4 * M_PI * out.s_x * out.s_x * out.s_x;
    }
    return out;
}

namespace {

// azimuthal measure of {phi : H(s, phi) <= E} at fixed latitude s = cos(theta)
struct Wedge {
    double u, es, e2;  // e2 = E / scale

    double numerator(double s) const { return 0.5 * u * s * s - es * s - e2; }
    double qlow(double s) const { return numerator(s) + std::sqrt(std::max(0.0, 1.0 - s * s)); }
    double qhigh(double s) const { return numerator(s) - std::sqrt(std::max(0.0, 1.0 - s * s)); }

    double operator()(double s) const {
        const double root = std::sqrt(std::max(0.0, 1.0 - s * s));
        const double num = numerator(s);
        if (num + root <= 0) return 2 * M_PI;
        if (num - root >= 0) return 0.0;
        return 2.0 * std::acos(std::clamp(num / root, -1.0, 1.0));
    }
};

// Scan grid for the turning latitudes: uniform cells plus logarithmic shells
// around each stationary latitude, where pairs of roots coalesce as E
// approaches a stationary energy.
std::vector<double> turning_scan_grid(const std::vector<double>& stationary_lats) {
    std::vector<double> grid;
    const int n_uniform = 2048;
    grid.reserve(n_uniform + 1 + stationary_lats.size() * 60);
    for (int i = 0; i <= n_uniform; ++i) grid.push_back(-1.0 + 2.0 * i / n_uniform);
    for (double s0 : stationary_lats) {
        grid.push_back(s0);
        for (int k = 2; k <= 10; ++k)
            for (double f : {1.0, 2.0, 5.0})
                for (double sgn : {-1.0, 1.0}) {
                    const double s = s0 + sgn * f * std::pow(10.0, -k);
                    if (s > -1.0 && s < 1.0) grid.push_back(s);
                }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<double> roots_on_grid(const std::function<double(double)>& f,
                                  const std::vector<double>& grid) {
    std::vector<double> roots;
    double fl = f(grid.front());
    for (size_t i = 1; i < grid.size(); ++i) {
        const double fr = f(grid[i]);
        if (fl == 0.0) roots.push_back(grid[i - 1]);
        else if (fl * fr < 0) roots.push_back(num::brent_root(f, grid[i - 1], grid[i], 1e-15));
        fl = fr;
    }
    if (fl == 0.0) roots.push_back(grid.back());
    return roots;
}

double action_area_geom(double E, const Geometry& g, const std::vector<double>& scan_grid,
                        const std::vector<double>& stationary_lats) {
    const Wedge w{g.u, g.es, E / g.scale};
    std::vector<double> cuts{-1.0, 1.0};
    // the wedge has a |s - s*| kink at a stationary latitude when E sits
    // near the corresponding stationary energy; always split there
    for (double s : stationary_lats)
        if (s > -1.0 && s < 1.0) cuts.push_back(s);
    for (double r : roots_on_grid([&](double s) { return w.qlow(s); }, scan_grid))
        cuts.push_back(r);
    for (double r : roots_on_grid([&](double s) { return w.qhigh(s); }, scan_grid))
        cuts.push_back(r);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               cuts.end());

    double area = 0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-14) continue;
        const double mid = w(0.5 * (a + b));
        if (mid == 0.0) continue;
        if (mid == 2 * M_PI) {
            area += 2 * M_PI * (b - a);
            continue;
        }
        area += num::integrate_tanh_sinh([&](double s) { return w(s); }, a, b, 7);
    }
    return std::clamp(area, 0.0, 4 * M_PI);
}

std::vector<double> stationary_latitudes(const GeomFixedPoints& gf) {
    std::vector<double> lats;
    for (const auto& fp : gf.points) lats.push_back(std::cos(fp.theta_signed));
    std::sort(lats.begin(), lats.end());
    lats.erase(std::unique(lats.begin(), lats.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               lats.end());
    return lats;
}

}  // namespace

double action_area(double E, const DimerParams& p) {
    p.validate();
    const auto g = Geometry::make(p, RadiusConvention::LargeJ);
    const auto gf = find_fixed_points_geom(g);
    const double span = gf.e_max - gf.e_min;
    if (E < gf.e_min - 1e-9 * span || E > gf.e_max + 1e-9 * span)
        throw ConfigError("action_area: E outside the classical energy range");
    const auto lats = stationary_latitudes(gf);
    return action_area_geom(std::clamp(E, gf.e_min, gf.e_max), g, turning_scan_grid(lats), lats);
}

double edge_polar_angle(const DimerParams& p) {
    const auto g = Geometry::make(p, RadiusConvention::LargeJ);
    const auto gf = find_fixed_points_geom(g);
    if (!gf.has_separatrix)
        throw ConfigError("edge preparation: separatrix required (u > 1, |eps| < eps_c)");
    const double fx = section_f(gf.saddle->theta_signed, g.u, g.es);
    auto fdiff = [&](double th) { return section_f(th, g.u, g.es) - fx; };
    const double lo = 1e-9, hi = 0.5 * M_PI;
    if (fdiff(lo) <= 0.0)
        throw ConfigError(
            "edge preparation: the separatrix does not cross the phi=0 meridian at n > 0 "
            "(requires u > 2 at zero bias)");
    return num::brent_root(fdiff, lo, hi, 1e-13);
}

double separatrix_border_n(const DimerParams& p, double phi) {
    if (p.U <= 0) throw ConfigError("separatrix_border_n: requires U > 0");
    return std::sqrt(0.5 * p.N * p.K / p.U * (1.0 + std::cos(phi)));
}

ActionTable ActionTable::build(const DimerParams& p, const BuildOptions& opt) {
    p.validate();
    const auto g = Geometry::make(p, opt.radius);
    const auto gf = find_fixed_points_geom(g);
    ActionTable t;
    t.params_ = p;
    t.radius_ = opt.radius;
    t.e_min_ = gf.e_min;
    t.e_max_ = gf.e_max;
    if (gf.has_separatrix) t.e_saddle_ = gf.saddle->energy;
    const double span = t.e_max_ - t.e_min_;
    if (span <= 0) throw NumericalError("ActionTable: degenerate energy range");

    const auto lats = stationary_latitudes(gf);
    const auto scan_grid = turning_scan_grid(lats);

    std::vector<double> xs;
    for (int i = 0; i < opt.base_grid; ++i)
        xs.push_back(t.e_min_ + span * i / (opt.base_grid - 1));
    // cluster near every stationary energy; essential around the saddle where
    // A'(E) diverges logarithmically
    std::vector<double> stations{t.e_min_, t.e_max_};
    for (const auto& fp : gf.points) stations.push_back(fp.energy);
    for (double es : stations)
        for (int k = 2; k <= 9; ++k)
            for (double f : {1.0, 3.0})
                for (double sgn : {-1.0, 1.0}) {
                    const double e = es + sgn * span * f * std::pow(10.0, -k);
                    if (e > t.e_min_ && e < t.e_max_) xs.push_back(e);
                }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [&](double a, double b) { return std::abs(a - b) < span * 1e-12; }),
             xs.end());

    auto eval_many = [&](const std::vector<double>& es) {
        std::vector<double> as(es.size());
        const int n = static_cast<int>(es.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
        for (int i = 0; i < n; ++i) as[i] = action_area_geom(es[i], g, scan_grid, lats);
        return as;
    };

    std::vector<double> ys = eval_many(xs);
    auto enforce_monotone = [&](std::vector<double>& v) {
        for (size_t i = 1; i < v.size(); ++i) {
            if (v[i] < v[i - 1] - 1e-8 * 4 * M_PI)
                throw NumericalError("ActionTable: non-monotone area data (quadrature too coarse)");
            v[i] = std::max(v[i], v[i - 1]);
        }
    };
    enforce_monotone(ys);
    ys.front() = 0.0;
    ys.back() = 4 * M_PI;
    t.pchip_ = num::Pchip::fit(xs, ys);

    for (int pass = 0; pass < opt.max_refine_passes; ++pass) {
        std::vector<double> mids;
        for (size_t i = 0; i + 1 < xs.size(); ++i)
            if (xs[i + 1] - xs[i] > span * 1e-11) mids.push_back(0.5 * (xs[i] + xs[i + 1]));
        const auto amid = eval_many(mids);
        std::vector<double> nx, ny;
        for (size_t i = 0; i < mids.size(); ++i)
            if (std::abs(t.pchip_(mids[i]) - amid[i]) > opt.refine_tol) {
                nx.push_back(mids[i]);
                ny.push_back(amid[i]);
            }
        if (nx.empty()) break;
        std::vector<double> mx(xs.size() + nx.size()), my(mx.size());
        std::merge(xs.begin(), xs.end(), nx.begin(), nx.end(), mx.begin());
        size_t ia = 0, ib = 0;
        for (size_t i = 0; i < mx.size(); ++i) {
            if (ia < xs.size() && mx[i] == xs[ia]) my[i] = ys[ia++];
            else my[i] = ny[ib++];
        }
        xs.swap(mx);
        ys.swap(my);
        enforce_monotone(ys);
        t.pchip_ = num::Pchip::fit(xs, ys);
    }
    return t;
}

double ActionTable::area(double E) const {
    const double e = std::clamp(E, e_min_, e_max_);
    return std::clamp(pchip_(e), 0.0, 4 * M_PI);
}

double ActionTable::energy_at_area(double a) const {
    if (a <= 0) return e_min_;
    if (a >= 4 * M_PI) return e_max_;
    return num::brent_root([&](double e) { return pchip_(e) - a; }, e_min_, e_max_,
                           (e_max_ - e_min_) * 1e-14);
}

double ActionTable::ladder_omega(double E) const {
    const double span = e_max_ - e_min_;
    if (E <= e_min_ || E >= e_max_)
        throw ConfigError("omega: E must lie strictly between the stationary energies");
    double h = 1e-4 * span;
    if (e_saddle_) h = std::min(h, 0.45 * std::abs(E - *e_saddle_));
    h = std::min({h, 0.9 * (E - e_min_), 0.9 * (e_max_ - E)});
    h = std::max(h, span * 1e-12);
    const double aprime = (pchip_(E + h) - pchip_(E - h)) / (2 * h);
    if (aprime <= 0) throw NumericalError("omega: flat action interpolant");
    return params_.planck_cell() / aprime;
}

double ActionTable::omega(double E) const {
    const double w = ladder_omega(E);
    // above the saddle A'(E) sums both islands
    return (e_saddle_ && E > *e_saddle_) ? 2.0 * w : w;
}

WkbSpectrum wkb_levels(const DimerParams& p, const ActionTable* table) {
    ActionTable local;
    if (!table) {
        ActionTable::BuildOptions opt;
        opt.radius = RadiusConvention::HalfInteger;
        local = ActionTable::build(p, opt);
        table = &local;
    } else if (table->radius() != RadiusConvention::HalfInteger) {
        throw ConfigError("wkb_levels: quantization requires a half-integer-radius table");
    }
    const double hc = p.planck_cell();
    const double four_pi = 4 * M_PI;

    WkbSpectrum out;
    out.params = p;

    const bool at_zero_bias = (p.eps == 0.0);
    const bool split = table->e_saddle().has_value();
    const double a_top = split ? table->area(*table->e_saddle()) : four_pi;

    std::vector<WkbLevel> levels;
    for (int nu = 0;; ++nu) {
        const double target = (nu + 0.5) * hc;
        if (target >= a_top) break;
        WkbLevel lv;
        lv.energy = table->energy_at_area(target);
        lv.region = WkbLevel::Region::Sea;
        levels.push_back(lv);
    }
    out.sea_count = static_cast<int>(levels.size());
    out.nu_x = a_top / hc;

    if (split && at_zero_bias) {
        const double b_top = 0.5 * (four_pi - a_top);  // one island
        int pairs = 0;
        for (int mu = 0;; ++mu) {
            const double target = (mu + 0.5) * hc;
            if (target >= b_top) break;
            WkbLevel lv;
            lv.energy = table->energy_at_area(four_pi - 2.0 * target);
            lv.region = WkbLevel::Region::Island;
            levels.push_back(lv);
            levels.push_back(lv);
            ++pairs;
        }
        out.island_pairs = pairs;

        // Primitive quantization can miscount by one cell at the saddle,
        // where the half-integer rule does not hold; pin the total to the
        // Hilbert-space dimension.
        const int want = p.dim();
        const int total = static_cast<int>(levels.size());
        if (total == want - 1) {
            WkbLevel lv;
            lv.energy = *table->e_saddle();
            lv.region = WkbLevel::Region::Sea;
            lv.near_separatrix = true;
            levels.push_back(lv);
        } else if (total == want + 1) {
            // drop one copy of the island pair closest to the saddle
            double best = 1e300;
            size_t best_i = 0;
            for (size_t i = 0; i < levels.size(); ++i)
                if (levels[i].region == WkbLevel::Region::Island &&
                    std::abs(levels[i].energy - *table->e_saddle()) < best) {
                    best = std::abs(levels[i].energy - *table->e_saddle());
                    best_i = i;
                }
            levels.erase(levels.begin() + best_i);
        } else if (total != want) {
            std::ostringstream os;
            os << "wkb_levels: produced " << total << " levels for dimension " << want;
            throw NumericalError(os.str());
        }
    }

    std::sort(levels.begin(), levels.end(),
              [](const WkbLevel& a, const WkbLevel& b) { return a.energy < b.energy; });
    const double wx = p.coupling_u() > 1 ? p.omega_separatrix() : 0.0;
    for (size_t i = 0; i < levels.size(); ++i) {
        levels[i].index = static_cast<int>(i);
        if (split) {
            const double d = std::abs(levels[i].energy - *table->e_saddle());
            levels[i].near_separatrix = levels[i].near_separatrix || d <= 2.0 * wx;
        }
        const double lo = table->e_min(), hi = table->e_max();
        const double span = hi - lo;
        const double e = std::clamp(levels[i].energy, lo + 1e-9 * span, hi - 1e-9 * span);
        levels[i].omega = table->omega(e);
    }
    out.levels = std::move(levels);
    return out;
}

double classical_frequency(double E, const DimerParams& p) {
    return ActionTable::build(p).omega(E);
}

double classical_frequency(double E, const ActionTable& table) { return table.omega(E); }

double near_separatrix_level(const DimerParams& p, double delta_nu, double log_b) {
    const double u = p.coupling_u();
    if (u <= 1) throw ConfigError("near_separatrix_level: requires u > 1");
    if (delta_nu == 0) return p.separatrix_energy();
    if (log_b <= 0) log_b = constants::fitted().separatrix_log_b;
    const double l = std::log(log_b * p.N / std::sqrt(u) / std::abs(delta_nu)) / M_PI;
    if (l <= 0) throw ConfigError("near_separatrix_level: |delta_nu| outside the log regime");
    return p.separatrix_energy() + delta_nu * p.omega_josephson() / l;
}

double fit_log_correction_b(const DimerParams& p, std::span<const double> exact_energies) {
    const double ex = p.separatrix_energy();
    const double wj = p.omega_josephson();
    // sea-side gaps only: island doublet splittings do not follow the ladder
    std::vector<double> mid, gap;
    for (double window = 2.0 * wj; window < 0.5 * p.N * p.K; window *= 2.0) {
        mid.clear();
        gap.clear();
        for (size_t i = 0; i + 1 < exact_energies.size(); ++i) {
            const double m = 0.5 * (exact_energies[i] + exact_energies[i + 1]);
            if (m < ex && ex - m < window) {
                mid.push_back(m);
                gap.push_back(exact_energies[i + 1] - exact_energies[i]);
            }
        }
        if (gap.size() >= 4) break;
    }
    if (gap.size() < 3)
        throw NumericalError("fit_log_correction_b: too few levels near the separatrix");
    auto rss = [&](double b) {
        double s = 0;
        for (size_t i = 0; i < mid.size(); ++i) {
            const double arg = b * p.N * p.K / std::abs(mid[i] - ex);
            if (arg <= 1.0) return 1e300;
            const double w = M_PI * wj / std::log(arg);
            s += (gap[i] - w) * (gap[i] - w);
        }
        return s;
    };
    double best_b = 1.0, best = 1e300;
    for (int i = 0; i <= 400; ++i) {
        const double b = std::pow(10.0, -1.7 + 3.4 * i / 400.0);
        const double r = rss(b);
        if (r < best) { best = r; best_b = b; }
    }
    return best_b;
}

}  // namespace bjj::wkb
