#include "bjj/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "bjj/errors.hpp"
#include "bjj/numerics.hpp"
#include "bjj/rng.hpp"
#include "bjj/wkb.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bjj::ensemble {

namespace {

constexpr std::size_t kBlock = 1024;  // fixed reduction block, thread-count independent

struct Sample {
    double n, phi;
};

// One point of the preparation's phase-space density in the (n, phi) chart.
// Coherent packets use the isotropic minimal widths sigma_phi = 1/sqrt(dim),
// sigma_n = sqrt(dim)/2 (product 1/2): these reproduce the exact first and
// second moments of a coherent state, which the quantum-correspondence gate
// is sensitive to.
Sample draw_point(const model::Preparation& prep, const DimerParams& p, rng::Stream& rs,
                  double n_center, double phi_center, bool is_fock) {
    if (is_fock) {
        return {n_center, -M_PI + 2.0 * M_PI * rs.uniform()};
    }
    const double a = 1.0 / std::sqrt(static_cast<double>(p.dim()));
    const double b = 0.5 * std::sqrt(static_cast<double>(p.dim()));
    const double half = 0.5 * p.N;
    double n;
    do {
        n = n_center + b * rs.normal();
    } while (std::abs(n) > half);  // tail beyond the poles is unphysical
    double phi = phi_center + a * rs.normal();
    phi = std::remainder(phi, 2.0 * M_PI);
    (void)prep;
    return {n, phi};
}

}  // namespace

PhasePointCloud sample_cloud(const model::Preparation& prep, const DimerParams& p,
                             std::size_t size, std::uint64_t seed) {
    p.validate();
    if (size < 1) throw ConfigError("sample_cloud: size must be >= 1");

    using Kind = model::Preparation::Kind;
    bool is_fock = false;
    double n_center = 0, phi_center = 0;
    switch (prep.kind) {
        case Kind::TwinFock:
            if (p.N % 2 != 0) throw ConfigError("TwinFock preparation requires even N");
            is_fock = true;
            break;
        case Kind::Fock:
            is_fock = true;
            n_center = prep.fock_n;
            if (std::abs(n_center) > 0.5 * p.N)
                throw ConfigError("Fock preparation: |n| must be <= N/2");
            break;
        case Kind::Zero:
            break;
        case Kind::Pi:
            phi_center = M_PI;
            break;
        case Kind::Edge:
            n_center = 0.5 * p.N * std::cos(wkb::edge_polar_angle(p));
            break;
        case Kind::SCS:
            // the amplitude gauge places the Bloch vector at azimuth -phi
            n_center = 0.5 * p.N * std::cos(prep.theta);
            phi_center = -prep.phi;
            break;
    }

    PhasePointCloud cloud;
    cloud.params = p;
    cloud.prep = prep;
    cloud.seed = seed;
    cloud.sx.resize(size);
    cloud.sy.resize(size);
    cloud.sz.resize(size);
    const double half = 0.5 * p.N;
    const auto n = static_cast<std::int64_t>(size);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        rng::Stream rs(rng::derive_stream(seed, static_cast<std::uint64_t>(i)));
        const Sample s = draw_point(prep, p, rs, n_center, phi_center, is_fock);
        const double z = s.n / half;
        const double st = std::sqrt(std::max(0.0, 1.0 - z * z));
        cloud.sx[i] = st * std::cos(s.phi);
        cloud.sy[i] = st * std::sin(s.phi);
        cloud.sz[i] = z;
    }
    return cloud;
}

namespace {

struct Flow {
    double u, es;
    inline void operator()(double x, double y, double z, double& dx, double& dy,
                           double& dz) const {
        dx = (es - u * z) * y;
        dy = (1.0 + u * x) * z - es * x;
        dz = -y;
    }
};

inline void rk4_step(const Flow& f, double dt, double& x, double& y, double& z) {
    double k1x, k1y, k1z, k2x, k2y, k2z, k3x, k3y, k3z, k4x, k4y, k4z;
    f(x, y, z, k1x, k1y, k1z);
    f(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, z + 0.5 * dt * k1z, k2x, k2y, k2z);
    f(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, z + 0.5 * dt * k2z, k3x, k3y, k3z);
    f(x + dt * k3x, y + dt * k3y, z + dt * k3z, k4x, k4y, k4z);
    x += dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    y += dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    z += dt / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
    const double r = std::sqrt(x * x + y * y + z * z);
    x /= r; y /= r; z /= r;
}

inline double scaled_energy(const Flow& f, double x, double, double z) {
    return 0.5 * f.u * z * z - f.es * z - x;
}

struct Accumulators {
    // per-block partial sums [block][time][3]
    std::vector<double> block_sum;
    std::vector<std::int64_t> hist_n, hist_phi;  // merged integer counts
    double max_drift = 0, max_norm_err = 0;
};

// One full propagation sweep at fixed dt.  Returns false when some
// trajectory exceeded the energy tolerance.
bool sweep(const PhasePointCloud& cloud, std::span<const double> tau,
           const PropagateOptions& opt, double dt, TrajectoryBundle& out) {
    const Flow flow{cloud.params.coupling_u(), cloud.params.bias_scaled()};
    const std::size_t npts = cloud.size();
    const std::size_t nt = tau.size();
    const std::size_t nblocks = (npts + kBlock - 1) / kBlock;
    const int dim = cloud.params.dim();
    const double j = cloud.params.spin_j();
    const int nphi = opt.phi_bins;

    std::vector<double> block_sum(nblocks * nt * 3, 0.0);
    std::vector<std::int64_t> hist_n, hist_phi;
    if (opt.record_histograms) {
        hist_n.assign(nt * dim, 0);
        hist_phi.assign(nt * static_cast<std::size_t>(nphi), 0);
    }
    double max_drift = 0, max_norm = 0;
    bool ok = true;

#pragma omp parallel if (opt.parallel) reduction(max : max_drift, max_norm) reduction(&& : ok)
    {
        std::vector<std::int64_t> ln, lp;
        if (opt.record_histograms) {
            ln.assign(hist_n.size(), 0);
            lp.assign(hist_phi.size(), 0);
        }
#pragma omp for schedule(dynamic)
        for (std::int64_t blk = 0; blk < static_cast<std::int64_t>(nblocks); ++blk) {
            const std::size_t beg = blk * kBlock, end = std::min(npts, beg + kBlock);
            double* bs = block_sum.data() + static_cast<std::size_t>(blk) * nt * 3;
            for (std::size_t ip = beg; ip < end; ++ip) {
                double x = cloud.sx[ip], y = cloud.sy[ip], z = cloud.sz[ip];
                const double e0 = scaled_energy(flow, x, y, z);
                double t = 0;
                for (std::size_t k = 0; k < nt; ++k) {
                    const double target = tau[k];
                    if (target > t) {
                        const int nsub = std::max(1, static_cast<int>(std::ceil((target - t) / dt)));
                        const double h = (target - t) / nsub;
                        for (int s = 0; s < nsub; ++s) rk4_step(flow, h, x, y, z);
                        t = target;
                    }
                    bs[k * 3 + 0] += x;
                    bs[k * 3 + 1] += y;
                    bs[k * 3 + 2] += z;
                    if (opt.record_histograms) {
                        const int bn = std::clamp(
                            static_cast<int>(std::lround(z * j + j)), 0, dim - 1);
                        ln[k * dim + bn]++;
                        const double phi = std::atan2(y, x);
                        int bp = static_cast<int>((phi + M_PI) / (2 * M_PI) * nphi);
                        bp = std::clamp(bp, 0, nphi - 1);
                        lp[k * nphi + bp]++;
                    }
                }
                const double drift = std::abs(scaled_energy(flow, x, y, z) - e0);
                max_drift = std::max(max_drift, drift);
                max_norm = std::max(max_norm,
                                    std::abs(std::sqrt(x * x + y * y + z * z) - 1.0));
                if (drift > opt.energy_tol) ok = false;
            }
        }
        if (opt.record_histograms) {
#pragma omp critical
            {
                for (std::size_t i = 0; i < hist_n.size(); ++i) hist_n[i] += ln[i];
                for (std::size_t i = 0; i < hist_phi.size(); ++i) hist_phi[i] += lp[i];
            }
        }
    }
    if (!ok) return false;

    out.mean_sx.assign(nt, 0.0);
    out.mean_sy.assign(nt, 0.0);
    out.mean_sz.assign(nt, 0.0);
    std::vector<double> tmp(nblocks);
    for (std::size_t k = 0; k < nt; ++k) {
        for (int c = 0; c < 3; ++c) {
            for (std::size_t b = 0; b < nblocks; ++b)
                tmp[b] = block_sum[b * nt * 3 + k * 3 + c];
            const double m = num::pairwise_sum(tmp) / static_cast<double>(npts);
            (c == 0 ? out.mean_sx : c == 1 ? out.mean_sy : out.mean_sz)[k] = m;
        }
    }
    if (opt.record_histograms) {
        out.hist_n.assign(nt, std::vector<double>(dim, 0.0));
        out.hist_phi.assign(nt, std::vector<double>(nphi, 0.0));
        for (std::size_t k = 0; k < nt; ++k) {
            for (int i = 0; i < dim; ++i)
                out.hist_n[k][i] = static_cast<double>(hist_n[k * dim + i]) / npts;
            for (int i = 0; i < nphi; ++i)
                out.hist_phi[k][i] = static_cast<double>(hist_phi[k * nphi + i]) / npts;
        }
    }
    out.max_energy_drift = 0.5 * max_drift;  // h = 2H/(NK)
    out.max_norm_error = max_norm;
    out.dt = dt;
    return true;
}

}  // namespace

TrajectoryBundle propagate(const PhasePointCloud& cloud, std::span<const double> tau,
                           const PropagateOptions& opt) {
    if (tau.empty() || tau.front() < 0)
        throw ConfigError("propagate: tau grid must start at >= 0 and be ascending");
    for (size_t i = 1; i < tau.size(); ++i)
        if (tau[i] < tau[i - 1]) throw ConfigError("propagate: tau grid must be ascending");

    TrajectoryBundle out;
    out.params = cloud.params;
    out.prep = cloud.prep;
    out.seed = cloud.seed;
    out.size = cloud.size();
    out.tau.assign(tau.begin(), tau.end());

    const double u = cloud.params.coupling_u();
    const double es = std::abs(cloud.params.bias_scaled());
    double dt = opt.dt_init > 0 ? opt.dt_init : 0.25 / (1.0 + u + es);
    for (int attempt = 0;; ++attempt) {
        if (sweep(cloud, tau, opt, dt, out)) break;
        dt *= 0.5;
        if (attempt >= 12 || dt < 1e-12)
            throw NumericalError("propagate: step-size underflow while chasing energy tolerance");
    }
    return out;
}

PhasePointCloud propagate_to(const PhasePointCloud& cloud, double tau,
                             const PropagateOptions& opt) {
    const Flow flow{cloud.params.coupling_u(), cloud.params.bias_scaled()};
    PhasePointCloud out = cloud;
    const double u = cloud.params.coupling_u();
    const double es = std::abs(cloud.params.bias_scaled());
    double dt = opt.dt_init > 0 ? opt.dt_init : 0.25 / (1.0 + u + es);

    for (int attempt = 0;; ++attempt) {
        bool ok = true;
        const auto npts = static_cast<std::int64_t>(cloud.size());
#pragma omp parallel for schedule(static) reduction(&& : ok) if (opt.parallel)
        for (std::int64_t i = 0; i < npts; ++i) {
            double x = cloud.sx[i], y = cloud.sy[i], z = cloud.sz[i];
            const double e0 = scaled_energy(flow, x, y, z);
            const int nsub = std::max(1, static_cast<int>(std::ceil(tau / dt)));
            const double h = tau / nsub;
            for (int s = 0; s < nsub; ++s) rk4_step(flow, h, x, y, z);
            if (std::abs(scaled_energy(flow, x, y, z) - e0) > opt.energy_tol) ok = false;
            out.sx[i] = x; out.sy[i] = y; out.sz[i] = z;
        }
        if (ok) break;
        dt *= 0.5;
        if (attempt >= 12) throw NumericalError("propagate_to: step-size underflow");
    }
    return out;
}

EnsembleSeries reduce_observables(const TrajectoryBundle& bundle) {
    if (bundle.tau.empty()) throw ConfigError("reduce_observables: empty bundle");
    const double j = bundle.params.spin_j();
    const double pf = std::sqrt(j * (j + 1.0)) / j;
    EnsembleSeries s;
    s.tau = bundle.tau;
    const std::size_t nt = bundle.tau.size();
    s.sx.resize(nt); s.sy.resize(nt); s.sz.resize(nt);
    s.visibility.resize(nt); s.purity.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        s.sx[k] = pf * bundle.mean_sx[k];
        s.sy[k] = pf * bundle.mean_sy[k];
        s.sz[k] = pf * bundle.mean_sz[k];
        s.visibility[k] = std::hypot(s.sx[k], s.sy[k]);
        s.purity[k] = 0.5 * (1.0 + s.sx[k] * s.sx[k] + s.sy[k] * s.sy[k] + s.sz[k] * s.sz[k]);
    }
    return s;
}

}  // namespace bjj::ensemble
