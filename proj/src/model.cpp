#include "bjj/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bjj/errors.hpp"
#include "bjj/wkb.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bjj::model {

namespace {

double off_coupling(double j, double m, double K) {
    return -0.5 * K * std::sqrt((j - m) * (j + m + 1.0));
}

double lchoose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

Tridiagonal build_hamiltonian(const DimerParams& p) {
    p.validate();
    const int n = p.dim();
    const double j = p.spin_j();
    Tridiagonal h;
    h.diag.resize(n);
    h.off.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        const double m = -j + i;
        h.diag[i] = p.U * m * m - p.eps * m;
    }
    for (int i = 0; i + 1 < n; ++i) {
        const double m = -j + i;
        h.off[i] = off_coupling(j, m, p.K);
    }
    return h;
}

namespace {

// eps = 0 path: split into even/odd blocks under m -> -m and solve each.
Spectrum diagonalize_parity_blocks(const Tridiagonal& h, const DimerParams& p) {
    const int n = p.dim();
    const double j = p.spin_j();
    const bool integer_j = (p.N % 2 == 0);
    const int even_size = integer_j ? p.N / 2 + 1 : (p.N + 1) / 2;
    const int odd_size = n - even_size;
    const int idx0 = p.N / 2;  // index of m = 0 (integer j) or m = -1/2 (half-integer)

    auto diag_at = [&](double m) { return p.U * m * m; };

    std::vector<double> ed, eo, fd, fo;  // diag/off per block
    if (integer_j) {
        ed.resize(even_size);
        fd.resize(even_size - 1);
        ed[0] = diag_at(0);
        for (int k = 1; k < even_size; ++k) ed[k] = diag_at(k);
        fd[0] = std::sqrt(2.0) * off_coupling(j, 0, p.K);
        for (int k = 1; k + 1 < even_size; ++k) fd[k] = off_coupling(j, k, p.K);
        if (odd_size > 0) {
            eo.resize(odd_size);
            fo.resize(std::max(0, odd_size - 1));
            for (int k = 1; k <= odd_size; ++k) eo[k - 1] = diag_at(k);
            for (int k = 1; k + 1 <= odd_size; ++k) fo[k - 1] = off_coupling(j, k, p.K);
        }
    } else {
        // pairs (|m> +/- |-m>)/sqrt(2), m = 1/2 .. j; the m = 1/2 pair picks
        // up the -1/2 <-> +1/2 coupling on the diagonal
        const double b_half = off_coupling(j, -0.5, p.K);
        ed.resize(even_size);
        eo.resize(odd_size);
        fd.resize(even_size - 1);
        fo.resize(odd_size - 1);
        for (int k = 0; k < even_size; ++k) {
            const double m = k + 0.5;
            ed[k] = diag_at(m);
            eo[k] = diag_at(m);
        }
        ed[0] += b_half;
        eo[0] -= b_half;
        for (int k = 0; k + 1 < even_size; ++k) {
            fd[k] = off_coupling(j, k + 0.5, p.K);
            fo[k] = fd[k];
        }
    }

    std::vector<double> val_e, vec_e, val_o, vec_o;
    tridiag_eigen_ql(ed, fd, val_e, &vec_e);
    if (odd_size > 0) tridiag_eigen_ql(eo, fo, val_o, &vec_o);

    struct Item { double e; int par; int idx; };
    std::vector<Item> items;
    items.reserve(n);
    for (int i = 0; i < even_size; ++i) items.push_back({val_e[i], +1, i});
    for (int i = 0; i < odd_size; ++i) items.push_back({val_o[i], -1, i});
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.e != b.e) return a.e < b.e;
        return a.par > b.par;
    });

    Spectrum s;
    s.params = p;
    s.energies.resize(n);
    s.parity.resize(n);
    s.vectors.assign(static_cast<size_t>(n) * n, 0.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int nu = 0; nu < n; ++nu) {
        s.energies[nu] = items[nu].e;
        s.parity[nu] = items[nu].par;
        double* col = s.vectors.data() + static_cast<size_t>(nu) * n;
        const int b = items[nu].idx;
        if (items[nu].par > 0) {
            const double* v = vec_e.data() + static_cast<size_t>(b) * even_size;
            if (integer_j) {
                col[idx0] = v[0];
                for (int k = 1; k < even_size; ++k) {
                    col[idx0 + k] = v[k] * inv_sqrt2;
                    col[idx0 - k] = v[k] * inv_sqrt2;
                }
            } else {
                for (int k = 0; k < even_size; ++k) {
                    col[idx0 + 1 + k] = v[k] * inv_sqrt2;
                    col[idx0 - k] = v[k] * inv_sqrt2;
                }
            }
        } else {
            const double* v = vec_o.data() + static_cast<size_t>(b) * odd_size;
            if (integer_j) {
                for (int k = 1; k <= odd_size; ++k) {
                    col[idx0 + k] = v[k - 1] * inv_sqrt2;
                    col[idx0 - k] = -v[k - 1] * inv_sqrt2;
                }
            } else {
                for (int k = 0; k < odd_size; ++k) {
                    col[idx0 + 1 + k] = v[k] * inv_sqrt2;
                    col[idx0 - k] = -v[k] * inv_sqrt2;
                }
            }
        }
    }
    (void)h;
    return s;
}

}  // namespace

Spectrum diagonalize(const Tridiagonal& h, const DimerParams& p) {
    if (h.dim() != p.dim()) throw ConfigError("diagonalize: matrix size does not match params");
    if (p.eps == 0.0) return diagonalize_parity_blocks(h, p);
    Spectrum s;
    s.params = p;
    tridiag_eigen_ql(h.diag, h.off, s.energies, &s.vectors);
    return s;
}

Spectrum diagonalize(const DimerParams& p) { return diagonalize(build_hamiltonian(p), p); }

std::string Preparation::name() const {
    switch (kind) {
        case Kind::TwinFock: return "twinfock";
        case Kind::Fock: return "fock:" + std::to_string(fock_n);
        case Kind::SCS: {
            std::ostringstream os;
            os << "scs:" << theta << "," << phi;
            return os.str();
        }
        case Kind::Zero: return "zero";
        case Kind::Pi: return "pi";
        case Kind::Edge: return "edge";
    }
    return "?";
}

Preparation Preparation::parse(const std::string& text) {
    if (text == "zero") return zero();
    if (text == "pi") return pi();
    if (text == "edge") return edge();
    if (text == "twinfock" || text == "twin_fock" || text == "twin") return twin_fock();
    if (text.rfind("fock:", 0) == 0) {
        try {
            return fock(std::stoi(text.substr(5)));
        } catch (const std::exception&) {
            throw ConfigError("bad Fock preparation: " + text);
        }
    }
    if (text.rfind("scs:", 0) == 0) {
        const auto body = text.substr(4);
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw ConfigError("scs preparation needs theta,phi");
        try {
            return scs(std::stod(body.substr(0, comma)), std::stod(body.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ConfigError("bad SCS preparation: " + text);
        }
    }
    throw ConfigError("unknown preparation '" + text +
                      "' (expected zero|pi|edge|twinfock|fock:n|scs:theta,phi)");
}

namespace {

QuantumState make_fock(const DimerParams& p, double n_value) {
    const double j = p.spin_j();
    if (n_value < -j - 1e-9 || n_value > j + 1e-9)
        throw ConfigError("Fock preparation: |n| must be <= N/2");
    const double idx_real = n_value + j;
    const int idx = static_cast<int>(std::lround(idx_real));
    if (std::abs(idx_real - idx) > 1e-9)
        throw ConfigError("Fock preparation: n must differ from N/2 by an integer");
    QuantumState st{p, std::vector<cdouble>(p.dim(), 0.0)};
    st.amps[idx] = 1.0;
    return st;
}

QuantumState make_scs(const DimerParams& p, double theta, double phi) {
    const int n = p.dim();
    const double j = p.spin_j();
    QuantumState st{p, std::vector<cdouble>(n, 0.0)};
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    if (s == 0.0) {  // north pole: |m = +j>
        st.amps[n - 1] = 1.0;
        return st;
    }
    if (c == 0.0) {  // south pole
        st.amps[0] = 1.0;
        return st;
    }
    std::vector<double> logmag(n);
    double logmax = -1e300;
    for (int i = 0; i < n; ++i) {
        const double m = -j + i;
        logmag[i] = 0.5 * lchoose(2 * j, j + m) + (j + m) * std::log(std::abs(c)) +
                    (j - m) * std::log(std::abs(s));
        logmax = std::max(logmax, logmag[i]);
    }
    double nrm2 = 0;
    for (int i = 0; i < n; ++i) {
        const double m = -j + i;
        double mag = std::exp(logmag[i] - logmax);
        if (c < 0 && std::fmod(j + m, 2.0) != 0.0) mag = -mag;  // only for theta > pi inputs
        const double arg = -(j - m) * phi;
        st.amps[i] = mag * cdouble(std::cos(arg), std::sin(arg));
        nrm2 += mag * mag;
    }
    const double scale = 1.0 / std::sqrt(nrm2);
    for (auto& a : st.amps) a *= scale;
    return st;
}

}  // namespace

QuantumState prepare(const DimerParams& p, const Preparation& prep) {
    p.validate();
    switch (prep.kind) {
        case Preparation::Kind::TwinFock:
            if (p.N % 2 != 0) throw ConfigError("TwinFock preparation requires even N");
            return make_fock(p, 0.0);
        case Preparation::Kind::Fock:
            return make_fock(p, prep.fock_n);
        case Preparation::Kind::SCS:
            return make_scs(p, prep.theta, prep.phi);
        case Preparation::Kind::Zero:
            return make_scs(p, 0.5 * M_PI, 0.0);
        case Preparation::Kind::Pi:
            return make_scs(p, 0.5 * M_PI, M_PI);
        case Preparation::Kind::Edge:
            return make_scs(p, wkb::edge_polar_angle(p), 0.0);
    }
    throw ConfigError("prepare: unknown preparation kind");
}

double QuantumState::norm() const {
    double s = 0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

namespace {

void require_match(const QuantumState& state, const Spectrum& spec) {
    if (!(state.params == spec.params))
        throw ConfigError("state and spectrum were built from different parameters");
}

std::vector<cdouble> eigen_overlaps(const QuantumState& state, const Spectrum& spec) {
    const int n = spec.dim();
    std::vector<cdouble> c(n);
    for (int nu = 0; nu < n; ++nu) {
        const double* v = spec.vectors.data() + static_cast<size_t>(nu) * n;
        cdouble acc = 0;
        for (int i = 0; i < n; ++i) acc += v[i] * state.amps[i];
        c[nu] = acc;
    }
    return c;
}

void synthesize(const Spectrum& spec, const std::vector<cdouble>& z, cdouble* out) {
    const int n = spec.dim();
    std::fill(out, out + n, cdouble(0));
    for (int nu = 0; nu < n; ++nu) {
        const double* v = spec.vectors.data() + static_cast<size_t>(nu) * n;
        const cdouble zz = z[nu];
        if (std::norm(zz) == 0.0) continue;
        for (int i = 0; i < n; ++i) out[i] += v[i] * zz;
    }
}

}  // namespace

QuantumState evolve(const QuantumState& state, const Spectrum& spec, double tau) {
    require_match(state, spec);
    const int n = spec.dim();
    auto c = eigen_overlaps(state, spec);
    const double invK = 1.0 / state.params.K;
    for (int nu = 0; nu < n; ++nu) {
        const double arg = -spec.energies[nu] * invK * tau;
        c[nu] *= cdouble(std::cos(arg), std::sin(arg));
    }
    QuantumState out{state.params, std::vector<cdouble>(n)};
    synthesize(spec, c, out.amps.data());
    return out;
}

BlochVector bloch_vector(const QuantumState& state) {
    const double nrm = state.norm();
    if (std::abs(nrm - 1.0) > 1e-6)
        throw ConfigError("bloch_vector: state is not normalized");
    const int n = state.dim();
    const double j = state.params.spin_j();
    double jz = 0;
    cdouble jplus = 0;
    for (int i = 0; i < n; ++i) {
        const double m = -j + i;
        jz += m * std::norm(state.amps[i]);
        if (i + 1 < n)
            jplus += std::conj(state.amps[i + 1]) * std::sqrt((j - m) * (j + m + 1.0)) *
                     state.amps[i];
    }
    const double scale = 2.0 / state.params.N;
    return {scale * jplus.real(), scale * jplus.imag(), scale * jz};
}

std::vector<double> occupation_distribution(const QuantumState& state) {
    std::vector<double> p(state.dim());
    for (int i = 0; i < state.dim(); ++i) p[i] = std::norm(state.amps[i]);
    return p;
}

analytics::LdosProfile ldos_quantum(const QuantumState& state, const Spectrum& spec) {
    require_match(state, spec);
    const auto c = eigen_overlaps(state, spec);
    std::vector<double> w(c.size());
    for (size_t i = 0; i < c.size(); ++i) w[i] = std::norm(c[i]);
    return analytics::LdosProfile::from_weights(spec.params, spec.energies, std::move(w));
}

double state_parity_expectation(const QuantumState& state) {
    const int n = state.dim();
    cdouble acc = 0;
    for (int i = 0; i < n; ++i) acc += std::conj(state.amps[i]) * state.amps[n - 1 - i];
    return acc.real();
}

BlochSeries evolve_bloch_series(const QuantumState& state, const Spectrum& spec,
                                std::span<const double> tau, bool parallel) {
    require_match(state, spec);
    const int n = spec.dim();
    const int nt = static_cast<int>(tau.size());
    const auto c = eigen_overlaps(state, spec);
    const auto h = build_hamiltonian(state.params);
    const double j = state.params.spin_j();
    const double invK = 1.0 / state.params.K;

    BlochSeries out;
    out.tau.assign(tau.begin(), tau.end());
    out.sx.resize(nt);
    out.sy.resize(nt);
    out.sz.resize(nt);
    out.norm_error.resize(nt);
    out.energy.resize(nt);
    out.energy_sq.resize(nt);

#pragma omp parallel if (parallel)
    {
        std::vector<cdouble> z(n), psi(n), hpsi(n);
#pragma omp for schedule(static)
        for (int k = 0; k < nt; ++k) {
            for (int nu = 0; nu < n; ++nu) {
                const double arg = -spec.energies[nu] * invK * tau[k];
                z[nu] = c[nu] * cdouble(std::cos(arg), std::sin(arg));
            }
            synthesize(spec, z, psi.data());

            double nrm2 = 0, jz = 0;
            cdouble jplus = 0;
            for (int i = 0; i < n; ++i) {
                const double pr = std::norm(psi[i]);
                nrm2 += pr;
                jz += (-j + i) * pr;
                if (i + 1 < n)
                    jplus += std::conj(psi[i + 1]) *
                             std::sqrt((j - (-j + i)) * (i + 1.0)) * psi[i];
            }
            h.apply(psi.data(), hpsi.data());
            cdouble e1 = 0;
            double e2 = 0;
            for (int i = 0; i < n; ++i) {
                e1 += std::conj(psi[i]) * hpsi[i];
                e2 += std::norm(hpsi[i]);
            }
            const double scale = 2.0 / state.params.N;
            out.sx[k] = scale * jplus.real();
            out.sy[k] = scale * jplus.imag();
            out.sz[k] = scale * jz;
            out.norm_error[k] = std::abs(std::sqrt(nrm2) - 1.0);
            out.energy[k] = e1.real();
            out.energy_sq[k] = e2;
        }
    }
    return out;
}

std::vector<double> sx_matrix_elements(const Spectrum& spec) {
    const int n = spec.dim();
    const double j = spec.params.spin_j();
    const double scale = 2.0 / spec.params.N;
    // W = Jx V, column by column (Jx is tridiagonal with zero diagonal)
    std::vector<double> w(static_cast<size_t>(n) * n);
    for (int nu = 0; nu < n; ++nu) {
        const double* v = spec.vectors.data() + static_cast<size_t>(nu) * n;
        double* wc = w.data() + static_cast<size_t>(nu) * n;
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            if (i > 0) acc += 0.5 * std::sqrt((j - (-j + i - 1)) * (i + 0.0)) * v[i - 1];
            if (i + 1 < n) acc += 0.5 * std::sqrt((j - (-j + i)) * (i + 1.0)) * v[i + 1];
            wc[i] = acc;
        }
    }
    std::vector<double> a(static_cast<size_t>(n) * n);
#pragma omp parallel for schedule(static)
    for (int nu = 0; nu < n; ++nu) {
        const double* wc = w.data() + static_cast<size_t>(nu) * n;
        for (int mu = 0; mu < n; ++mu) {
            const double* v = spec.vectors.data() + static_cast<size_t>(mu) * n;
            double acc = 0;
            for (int i = 0; i < n; ++i) acc += v[i] * wc[i];
            a[static_cast<size_t>(nu) * n + mu] = scale * acc;
        }
    }
    return a;
}

}  // namespace bjj::model
