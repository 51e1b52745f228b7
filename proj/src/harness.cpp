#include "bjj/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "bjj/constants.hpp"
#include "bjj/errors.hpp"
#include "bjj/io.hpp"
#include "bjj/numerics.hpp"
#include "bjj/wigner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bjj::harness {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool near_separatrix_prep(const model::Preparation& prep, const DimerParams& p) {
    using Kind = model::Preparation::Kind;
    return (prep.kind == Kind::Pi || prep.kind == Kind::Edge) && p.coupling_u() > 1.0;
}

std::string run_tag(const DimerParams& p, const model::Preparation& prep,
                    const char* flavor) {
    std::ostringstream os;
    std::string prep_name = prep.name();
    std::replace(prep_name.begin(), prep_name.end(), ':', '_');
    std::replace(prep_name.begin(), prep_name.end(), ',', '_');
    os << flavor << "_" << prep_name << "_N" << p.N << "_u" << p.coupling_u();
    std::string s = os.str();
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

}  // namespace

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

double RunConfig::max_expected_frequency() const {
    const double wplus = std::max(std::sqrt((params.K + params.N * params.U) * params.K),
                                  params.N * params.U);
    return 2.0 * (wplus + std::abs(params.eps)) / params.K;  // tau units
}

double RunConfig::slow_frequency() const {
    const double u = params.coupling_u();
    if (near_separatrix_prep(prep, params)) return params.omega_separatrix() / params.K;
    if (u > 0) return params.omega_josephson() / params.K;
    return 1.0;  // bare Rabi precession
}

void RunConfig::finalize() {
    params.validate();
    const double guard = M_PI / (2.0 * max_expected_frequency());
    if (dt == 0) dt = 0.8 * guard;
    if (dt >= guard) {
        std::ostringstream os;
        os << "sample step dt=" << dt << " violates the Nyquist guard " << guard
           << " against twice the top frequency";
        throw ConfigError(os.str());
    }
    const double period = 2.0 * M_PI / slow_frequency();
    if (horizon == 0) horizon = 200.0 * period;
    if (horizon < 20.0 * period) {
        std::ostringstream os;
        os << "horizon " << horizon << " covers fewer than 20 periods (" << 20.0 * period
           << ") of the slowest predicted frequency";
        throw ConfigError(os.str());
    }
    if (ensemble_size < 1) throw ConfigError("ensemble size must be >= 1");
    if (grid < 16) throw ConfigError("grid must be >= 16");
}

std::vector<double> tau_grid(double horizon, double dt) {
    const auto n = static_cast<std::size_t>(std::floor(horizon / dt)) + 1;
    std::vector<double> tau(n);
    for (std::size_t i = 0; i < n; ++i) tau[i] = dt * static_cast<double>(i);
    return tau;
}

TimeSeries quantum_series(const model::QuantumState& state, const model::Spectrum& spec,
                          const std::vector<double>& tau) {
    const auto bs = model::evolve_bloch_series(state, spec, tau);
    TimeSeries ts;
    ts.provenance = Provenance::Quantum;
    ts.tau = bs.tau;
    ts.sx = bs.sx;
    ts.sy = bs.sy;
    ts.sz = bs.sz;
    ts.visibility.resize(tau.size());
    ts.purity.resize(tau.size());
    for (size_t i = 0; i < tau.size(); ++i) {
        ts.visibility[i] = std::hypot(bs.sx[i], bs.sy[i]);
        ts.purity[i] =
            0.5 * (1.0 + bs.sx[i] * bs.sx[i] + bs.sy[i] * bs.sy[i] + bs.sz[i] * bs.sz[i]);
    }
    return ts;
}

namespace {

std::string series_csv(const TimeSeries& ts) {
    io::Csv csv({"tau", "sx", "sy", "sz", "visibility", "purity"});
    for (size_t i = 0; i < ts.size(); ++i)
        csv.row_values({ts.tau[i], ts.sx[i], ts.sy[i], ts.sz[i], ts.visibility[i], ts.purity[i]});
    return csv.str();
}

std::string ldos_csv(const analytics::LdosProfile& prof, const model::Spectrum* spec) {
    io::Csv csv({"nu", "energy", "weight", "parity"});
    for (size_t i = 0; i < prof.energies.size(); ++i) {
        const int par = (spec && spec->has_parity()) ? spec->parity[i] : 0;
        csv.row({io::Csv::format(static_cast<double>(i)), io::Csv::format(prof.energies[i]),
                 io::Csv::format(prof.weights[i]), std::to_string(par)});
    }
    return csv.str();
}

std::string spectrum_csv(const PowerSpectrum& sp) {
    io::Csv csv({"omega", "density"});
    for (size_t i = 0; i < sp.omega.size(); ++i)
        csv.row_values({sp.omega[i], sp.density[i]});
    return csv.str();
}

nlohmann::json stats_json(const FluctuationStats& st) {
    return {{"mean", st.mean},
            {"rms", st.rms},
            {"dominant_frequency", st.dominant_frequency},
            {"peak_frequency", st.peak_frequency},
            {"parseval_ratio", st.parseval_ratio},
            {"analyzed_samples", st.analyzed_samples}};
}

}  // namespace

QuantumRunResult run_quantum(const RunConfig& cfg_in, bool write_files) {
    RunConfig cfg = cfg_in;
    cfg.finalize();
    apply_threads(cfg.threads);
    const double t0 = now_seconds();

    const auto spec = model::diagonalize(cfg.params);
    const auto state = model::prepare(cfg.params, cfg.prep);
    const auto tau = tau_grid(cfg.horizon, cfg.dt);

    QuantumRunResult res;
    res.series = quantum_series(state, spec, tau);
    res.ldos = model::ldos_quantum(state, spec);
    res.stats = analyze_sx(res.series);

    if (write_files) {
        io::ensure_dir(cfg.out_dir);
        const std::string tag = run_tag(cfg.params, cfg.prep, "quantum");
        const std::string base = cfg.out_dir + "/" + tag;
        io::atomic_write(base + "_series.csv", series_csv(res.series));
        io::atomic_write(base + "_ldos.csv", ldos_csv(res.ldos, &spec));
        io::atomic_write(base + "_spectrum.csv", spectrum_csv(res.stats.spectrum));
        auto j = io::sidecar_base(cfg.params);
        j["preparation"] = cfg.prep.name();
        j["horizon"] = cfg.horizon;
        j["dt"] = cfg.dt;
        j["stats"] = stats_json(res.stats);
        j["ldos"] = {{"participation", res.ldos.participation()},
                     {"energy_width", res.ldos.energy_width()},
                     {"beat_frequency", res.ldos.beat_frequency()},
                     {"discrete_dominated", res.ldos.discrete_dominated()}};
        io::write_sidecar(base + ".json", std::move(j), now_seconds() - t0);
        res.files = {base + "_series.csv", base + "_ldos.csv", base + "_spectrum.csv",
                     base + ".json"};
    }
    return res;
}

EnsembleRunResult run_ensemble(const RunConfig& cfg_in, bool write_files, bool histograms) {
    RunConfig cfg = cfg_in;
    cfg.finalize();
    apply_threads(cfg.threads);
    const double t0 = now_seconds();

    const auto cloud = ensemble::sample_cloud(cfg.prep, cfg.params, cfg.ensemble_size, cfg.seed);
    const auto tau = tau_grid(cfg.horizon, cfg.dt);
    ensemble::PropagateOptions opt;
    opt.record_histograms = histograms;
    const auto bundle = ensemble::propagate(cloud, tau, opt);
    const auto red = ensemble::reduce_observables(bundle);

    EnsembleRunResult res;
    res.series.provenance = Provenance::Ensemble;
    res.series.tau = red.tau;
    res.series.sx = red.sx;
    res.series.sy = red.sy;
    res.series.sz = red.sz;
    res.series.visibility = red.visibility;
    res.series.purity = red.purity;
    res.stats = analyze_sx(res.series);
    res.bundle = bundle;

    if (write_files) {
        io::ensure_dir(cfg.out_dir);
        const std::string tag = run_tag(cfg.params, cfg.prep, "ensemble");
        const std::string base = cfg.out_dir + "/" + tag;
        io::atomic_write(base + "_series.csv", series_csv(res.series));
        io::atomic_write(base + "_spectrum.csv", spectrum_csv(res.stats.spectrum));
        res.files = {base + "_series.csv", base + "_spectrum.csv"};
        if (histograms && !bundle.hist_n.empty()) {
            io::Csv csv({"tau", "n", "probability"});
            const double j = cfg.params.spin_j();
            for (size_t k = 0; k < bundle.tau.size(); ++k)
                for (size_t b = 0; b < bundle.hist_n[k].size(); ++b)
                    csv.row_values({bundle.tau[k], -j + static_cast<double>(b),
                                    bundle.hist_n[k][b]});
            io::atomic_write(base + "_hist_n.csv", csv.str());
            res.files.push_back(base + "_hist_n.csv");
        }
        auto j = io::sidecar_base(cfg.params);
        j["preparation"] = cfg.prep.name();
        j["horizon"] = cfg.horizon;
        j["dt_sample"] = cfg.dt;
        j["ensemble"] = {{"size", cfg.ensemble_size},
                         {"seed", cfg.seed},
                         {"rk4_step", bundle.dt},
                         {"max_energy_drift_NK", bundle.max_energy_drift},
                         {"max_norm_error", bundle.max_norm_error}};
        j["stats"] = stats_json(res.stats);
        io::write_sidecar(base + ".json", std::move(j), now_seconds() - t0);
        res.files.push_back(base + ".json");
    }
    return res;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, bool write_files) {
    if (cfg.particle_counts.empty() || cfg.u_over_n.empty() || cfg.preps.empty())
        throw ConfigError("run_sweep: empty sweep axes");
    std::vector<SweepRow> rows;
    for (int n_particles : cfg.particle_counts) {
        // one diagonalization per (N, u); preparations share it
        for (double x : cfg.u_over_n) {
            const double u = x * n_particles;
            std::optional<model::Spectrum> spec;
            std::optional<DimerParams> params;
            try {
                params = DimerParams::scaled(n_particles, u, 0.0, cfg.K);
                spec = model::diagonalize(*params);
            } catch (const std::exception& e) {
                for (const auto& prep : cfg.preps) {
                    SweepRow r;
                    r.N = n_particles; r.u = u; r.u_over_n = x; r.prep = prep.name();
                    r.ok = false; r.message = e.what();
                    rows.push_back(r);
                }
                continue;
            }
            for (const auto& prep : cfg.preps) {
                SweepRow r;
                r.N = n_particles; r.u = u; r.u_over_n = x; r.prep = prep.name();
                try {
                    RunConfig rc;
                    rc.params = *params;
                    rc.prep = prep;
                    rc.finalize();
                    const auto state = model::prepare(*params, prep);
                    const auto tau = tau_grid(rc.horizon, rc.dt);
                    const auto series = quantum_series(state, spec.value(), tau);
                    const auto st = analyze_sx(series);
                    const auto prof = model::ldos_quantum(state, spec.value());
                    r.ok = true;
                    r.mean_sx = st.mean;
                    r.rms_sx = st.rms;
                    r.dominant_frequency = st.dominant_frequency;
                    r.peak_frequency = st.peak_frequency;
                    r.participation = prof.participation();
                    r.energy_width = prof.energy_width();
                } catch (const std::exception& e) {
                    r.ok = false;
                    r.message = e.what();
                }
                rows.push_back(r);
            }
        }
    }
    if (write_files) {
        io::ensure_dir(cfg.out_dir);
        io::Csv csv({"N", "u", "u_over_N", "prep", "status", "message", "mean_sx", "rms_sx",
                     "dominant_frequency", "peak_frequency", "participation", "energy_width"});
        for (const auto& r : rows)
            csv.row({std::to_string(r.N), io::Csv::format(r.u), io::Csv::format(r.u_over_n),
                     r.prep, r.ok ? "ok" : "failed", r.message, io::Csv::format(r.mean_sx),
                     io::Csv::format(r.rms_sx), io::Csv::format(r.dominant_frequency),
                     io::Csv::format(r.peak_frequency), io::Csv::format(r.participation),
                     io::Csv::format(r.energy_width)});
        io::atomic_write(cfg.out_dir + "/" + cfg.label + ".csv", csv.str());
        auto j = nlohmann::json::object();
        j["label"] = cfg.label;
        j["N"] = cfg.particle_counts;
        j["u_over_N"] = cfg.u_over_n;
        j["points"] = rows.size();
        io::write_sidecar(cfg.out_dir + "/" + cfg.label + ".json", std::move(j), 0.0);
    }
    return rows;
}

// ---- figure presets --------------------------------------------------------

namespace {

std::string wigner_csv(const wigner::WignerField& f, const DimerParams& p) {
    io::Csv csv({"phi", "cos_theta", "n", "value"});
    const double j = p.spin_j();
    for (int i = 0; i < f.grid.n_mu(); ++i)
        for (int k = 0; k < f.grid.n_phi(); ++k)
            csv.row_values({f.grid.phi[k], f.grid.mu[i], j * f.grid.mu[i], f.at(i, k)});
    return csv.str();
}

std::vector<std::string> fig_spectra(const std::string& out_dir, bool /*quick*/) {
    // exact vs WKB level ladders, N = 20, u = 10
    const auto p = DimerParams::scaled(20, 10.0);
    const auto spec = model::diagonalize(p);
    const auto table = wkb::ActionTable::build(p);
    const auto wkbs = wkb::wkb_levels(p, &table);

    io::Csv exact({"nu", "energy", "parity"});
    for (int i = 0; i < spec.dim(); ++i)
        exact.row({std::to_string(i), io::Csv::format(spec.energies[i]),
                   std::to_string(spec.parity[i])});
    io::Csv semi({"nu", "energy", "omega", "region", "near_separatrix"});
    for (const auto& lv : wkbs.levels)
        semi.row({std::to_string(lv.index), io::Csv::format(lv.energy),
                  io::Csv::format(lv.omega),
                  lv.region == wkb::WkbLevel::Region::Sea ? "sea" : "island",
                  lv.near_separatrix ? "1" : "0"});
    io::ensure_dir(out_dir);
    const std::string f1 = out_dir + "/fig1_exact_levels.csv";
    const std::string f2 = out_dir + "/fig1_wkb_levels.csv";
    io::atomic_write(f1, exact.str());
    io::atomic_write(f2, semi.str());
    auto j = io::sidecar_base(p);
    j["nu_x"] = wkbs.nu_x;
    io::write_sidecar(out_dir + "/fig1.json", std::move(j), 0.0);
    return {f1, f2, out_dir + "/fig1.json"};
}

std::vector<std::string> fig_preparations(const std::string& out_dir, bool quick) {
    // Mercator Wigner plots of the four preparations, N = 40, u = 5
    const auto p = DimerParams::scaled(40, 5.0);
    const int res = quick ? 128 : 512;
    const auto grid = wigner::SphereGrid::uniform(res, res);
    io::ensure_dir(out_dir);
    std::vector<std::string> files;
    for (const char* name : {"twinfock", "zero", "pi", "edge"}) {
        const auto prep = model::Preparation::parse(name);
        const auto state = model::prepare(p, prep);
        const auto field = wigner::state_to_wigner(state, grid);
        const std::string path = out_dir + "/fig2_wigner_" + name + ".csv";
        io::atomic_write(path, wigner_csv(field, p));
        files.push_back(path);
    }
    auto j = io::sidecar_base(p);
    j["grid"] = res;
    j["normalization"] = "int rho dOmega/h = 1";
    io::write_sidecar(out_dir + "/fig2.json", std::move(j), 0.0);
    files.push_back(out_dir + "/fig2.json");
    return files;
}

std::vector<std::string> fig_evolved_state(const std::string& out_dir, bool quick) {
    // TwinFock at tau = 4 for N = 40, u = 5: quantum Wigner, classical cloud,
    // occupation statistics
    const auto p = DimerParams::scaled(40, 5.0);
    const double tau = 4.0;
    const auto spec = model::diagonalize(p);
    const auto state0 = model::prepare(p, model::Preparation::twin_fock());
    const auto state = model::evolve(state0, spec, tau);

    io::ensure_dir(out_dir);
    std::vector<std::string> files;
    const int res = quick ? 128 : 512;
    const auto grid = wigner::SphereGrid::uniform(res, res);
    const auto field = wigner::state_to_wigner(state, grid);
    files.push_back(out_dir + "/fig3_wigner_quantum.csv");
    io::atomic_write(files.back(), wigner_csv(field, p));

    const std::size_t size = quick ? 20000 : 100000;
    const auto cloud = ensemble::sample_cloud(model::Preparation::twin_fock(), p, size, 777);
    const auto moved = ensemble::propagate_to(cloud, tau);
    io::Csv pts({"phi", "n"});
    const std::size_t keep = std::min<std::size_t>(5000, moved.size());
    for (std::size_t i = 0; i < keep; ++i)
        pts.row_values({std::atan2(moved.sy[i], moved.sx[i]), p.spin_j() * moved.sz[i]});
    files.push_back(out_dir + "/fig3_cloud.csv");
    io::atomic_write(files.back(), pts.str());

    std::vector<double> taus{0.0, tau};
    ensemble::PropagateOptions opt;
    opt.record_histograms = true;
    const auto bundle = ensemble::propagate(cloud, taus, opt);
    const auto pq = model::occupation_distribution(state);
    io::Csv occ({"n", "quantum", "classical"});
    for (int i = 0; i < p.dim(); ++i)
        occ.row_values({-p.spin_j() + i, pq[i], bundle.hist_n[1][i]});
    files.push_back(out_dir + "/fig3_occupation.csv");
    io::atomic_write(files.back(), occ.str());

    auto j = io::sidecar_base(p);
    j["tau"] = tau;
    j["ensemble_size"] = size;
    io::write_sidecar(out_dir + "/fig3.json", std::move(j), 0.0);
    files.push_back(out_dir + "/fig3.json");
    return files;
}

std::vector<std::string> fig_bloch_series(const std::string& out_dir, bool quick) {
    // Sx(tau) for the four preparations, quantum vs ensemble, N = 40, u = 5
    const auto p = DimerParams::scaled(40, 5.0);
    std::vector<std::string> files;
    for (const char* name : {"zero", "pi", "edge", "twinfock"}) {
        RunConfig rc;
        rc.params = p;
        rc.prep = model::Preparation::parse(name);
        rc.horizon = 120.0;
        rc.dt = 0.02;
        rc.out_dir = out_dir;
        rc.ensemble_size = quick ? 20000 : 100000;
        auto qr = run_quantum(rc);
        auto er = run_ensemble(rc);
        files.insert(files.end(), qr.files.begin(), qr.files.end());
        files.insert(files.end(), er.files.begin(), er.files.end());
    }
    return files;
}

std::vector<std::string> fig_ldos(const std::string& out_dir, bool /*quick*/) {
    // exact and semiclassical LDOS plus fluctuation spectra, N = 500, u = 4
    const auto p = DimerParams::scaled(500, 4.0);
    const auto spec = model::diagonalize(p);
    // half-integer radius so the table brackets the exact level range
    wkb::ActionTable::BuildOptions topt;
    topt.radius = wkb::RadiusConvention::HalfInteger;
    const auto table = wkb::ActionTable::build(p, topt);
    io::ensure_dir(out_dir);
    std::vector<std::string> files;
    for (const char* name : {"zero", "pi", "edge", "twinfock"}) {
        const auto prep = model::Preparation::parse(name);
        const auto state = model::prepare(p, prep);
        const auto exact = model::ldos_quantum(state, spec);
        const auto semi = analytics::ldos_semiclassical(prep, spec, table);
        io::Csv csv({"nu", "energy", "exact", "semiclassical", "parity"});
        for (int i = 0; i < spec.dim(); ++i)
            csv.row({std::to_string(i), io::Csv::format(spec.energies[i]),
                     io::Csv::format(exact.weights[i]), io::Csv::format(semi.weights[i]),
                     std::to_string(spec.parity[i])});
        const std::string path = out_dir + std::string("/fig5_ldos_") + name + ".csv";
        io::atomic_write(path, csv.str());
        files.push_back(path);

        RunConfig rc;
        rc.params = p;
        rc.prep = prep;
        rc.out_dir = out_dir;
        auto qr = run_quantum(rc, false);
        const std::string spath = out_dir + std::string("/fig5_spectrum_") + name + ".csv";
        io::atomic_write(spath, spectrum_csv(qr.stats.spectrum));
        files.push_back(spath);
    }
    auto j = io::sidecar_base(p);
    io::write_sidecar(out_dir + "/fig5.json", std::move(j), 0.0);
    files.push_back(out_dir + "/fig5.json");
    return files;
}

std::vector<std::string> fig_participation(const std::string& out_dir, bool quick) {
    SweepConfig sc;
    sc.particle_counts = quick ? std::vector<int>{100, 500} : std::vector<int>{100, 500, 1000};
    sc.u_over_n = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    sc.preps = {model::Preparation::zero(), model::Preparation::pi(),
                model::Preparation::edge()};
    sc.out_dir = out_dir;
    sc.label = "fig6_participation";
    auto rows = run_sweep(sc);
    // attach the closed-form estimates
    io::Csv csv({"N", "u_over_N", "prep", "participation", "estimate", "ratio_sqrt_uN"});
    for (const auto& r : rows) {
        if (!r.ok) continue;
        double est = 0;
        try {
            est = analytics::participation_estimate(model::Preparation::parse(r.prep),
                                                    DimerParams::scaled(r.N, r.u))
                      .participation;
        } catch (const ConfigError&) {
        }
        csv.row_values({static_cast<double>(r.N), r.u_over_n, 0.0, r.participation, est,
                        std::sqrt(r.u_over_n)});
    }
    const std::string path = out_dir + "/fig6_estimates.csv";
    io::atomic_write(path, csv.str());
    return {out_dir + "/fig6_participation.csv", path};
}

std::vector<std::string> fig_frequencies(const std::string& out_dir, bool quick) {
    SweepConfig sc;
    sc.particle_counts = quick ? std::vector<int>{100} : std::vector<int>{100, 500, 1000};
    sc.u_over_n = {0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    sc.preps = {model::Preparation::zero(), model::Preparation::pi(),
                model::Preparation::edge()};
    sc.out_dir = out_dir;
    sc.label = "fig7_frequencies";
    auto rows = run_sweep(sc);
    io::Csv csv({"N", "u_over_N", "prep", "measured", "theory_observed"});
    for (const auto& r : rows) {
        if (!r.ok) continue;
        double theory = 0;
        try {
            theory = analytics::frequency_estimate(model::Preparation::parse(r.prep),
                                                   DimerParams::scaled(r.N, r.u))
                         .observed;
        } catch (const ConfigError&) {
        }
        csv.row({std::to_string(r.N), io::Csv::format(r.u_over_n), r.prep,
                 io::Csv::format(r.dominant_frequency), io::Csv::format(theory)});
    }
    const std::string path = out_dir + "/fig7_theory.csv";
    io::atomic_write(path, csv.str());
    return {out_dir + "/fig7_frequencies.csv", path};
}

std::vector<std::string> fig_longtime(const std::string& out_dir, bool quick) {
    std::vector<std::string> files;
    {
        SweepConfig sc;
        sc.particle_counts = quick ? std::vector<int>{100} : std::vector<int>{100, 500, 1000};
        sc.u_over_n = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
        sc.preps = {model::Preparation::zero(), model::Preparation::twin_fock(),
                    model::Preparation::edge(), model::Preparation::pi()};
        sc.out_dir = out_dir;
        sc.label = "fig8_longtime";
        run_sweep(sc);
        files.push_back(out_dir + "/fig8_longtime.csv");
    }
    {
        // RMS against N at fixed u = 4 with power-law fits
        SweepConfig sc;
        sc.particle_counts = quick ? std::vector<int>{100, 200} : std::vector<int>{100, 200, 500, 1000};
        sc.preps = {model::Preparation::edge(), model::Preparation::pi()};
        sc.out_dir = out_dir;
        sc.label = "fig8_inset_raw";
        // fixed u means a different u/N per N; emit one row per N
        std::vector<SweepRow> rows;
        for (int n_particles : sc.particle_counts) {
            SweepConfig one = sc;
            one.particle_counts = {n_particles};
            one.u_over_n = {4.0 / n_particles};
            auto r = run_sweep(one, false);
            rows.insert(rows.end(), r.begin(), r.end());
        }
        io::Csv csv({"N", "prep", "rms_sx"});
        for (const auto& r : rows)
            if (r.ok) csv.row({std::to_string(r.N), r.prep, io::Csv::format(r.rms_sx)});
        io::ensure_dir(out_dir);
        io::atomic_write(out_dir + "/fig8_inset.csv", csv.str());
        files.push_back(out_dir + "/fig8_inset.csv");

        for (const char* prep : {"edge", "pi"}) {
            std::vector<double> lx, ly;
            for (const auto& r : rows)
                if (r.ok && r.prep == prep && r.rms_sx > 0) {
                    lx.push_back(std::log(static_cast<double>(r.N)));
                    ly.push_back(std::log(r.rms_sx));
                }
            if (lx.size() >= 2) {
                auto j = nlohmann::json::object();
                j["prep"] = prep;
                j["exponent"] = num::fit_slope(lx, ly);
                io::write_sidecar(out_dir + "/fig8_fit_" + std::string(prep) + ".json",
                                  std::move(j), 0.0);
                files.push_back(out_dir + "/fig8_fit_" + std::string(prep) + ".json");
            }
        }
    }
    return files;
}

}  // namespace

std::vector<std::string> run_figure(int index, const std::string& out_dir, bool quick) {
    switch (index) {
        case 1: return fig_spectra(out_dir, quick);
        case 2: return fig_preparations(out_dir, quick);
        case 3: return fig_evolved_state(out_dir, quick);
        case 4: return fig_bloch_series(out_dir, quick);
        case 5: return fig_ldos(out_dir, quick);
        case 6: return fig_participation(out_dir, quick);
        case 7: return fig_frequencies(out_dir, quick);
        case 8: return fig_longtime(out_dir, quick);
        default: throw ConfigError("figure index must be 1..8");
    }
}

}  // namespace bjj::harness
