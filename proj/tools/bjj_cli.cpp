// Batch front end: every subcommand runs a self-contained computation and
// writes CSV data plus a JSON sidecar into --out.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bjj/analytics.hpp"
#include "bjj/constants.hpp"
#include "bjj/errors.hpp"
#include "bjj/harness.hpp"
#include "bjj/io.hpp"
#include "bjj/model.hpp"
#include "bjj/version.hpp"
#include "bjj/wigner.hpp"
#include "bjj/wkb.hpp"

namespace {

struct CommonArgs {
    int N = 40;
    double u = 0;       // scaled coupling NU/K; wins over U when nonzero
    double U = 0;
    double K = 1.0;
    double eps = 0.0;
    std::string prep = "zero";
    double T = 0;
    double dt = 0;
    std::size_t size = 10000;
    std::uint64_t seed = 12345;
    std::string out = "out";
    int grid = 512;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--N", a.N, "particle count");
    cmd->add_option("--u", a.u, "scaled coupling N*U/K (overrides --U)");
    cmd->add_option("--U", a.U, "on-site interaction");
    cmd->add_option("--K", a.K, "hopping amplitude");
    cmd->add_option("--eps", a.eps, "bias between site energies (units of K)");
    cmd->add_option("--prep", a.prep, "zero|pi|edge|twinfock|fock:n|scs:theta,phi");
    cmd->add_option("--T", a.T, "time horizon (tau units; 0 = auto)");
    cmd->add_option("--dt", a.dt, "sample step (tau units; 0 = auto)");
    cmd->add_option("--size", a.size, "ensemble size");
    cmd->add_option("--seed", a.seed, "master seed");
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_option("--grid", a.grid, "phase-space mesh per axis");
    cmd->add_option("--threads", a.threads, "worker threads (0 = library default)");
}

bjj::DimerParams make_params(const CommonArgs& a) {
    if (a.u != 0) return bjj::DimerParams::scaled(a.N, a.u, a.eps, a.K);
    return bjj::DimerParams::physical(a.N, a.U, a.K, a.eps * a.K);
}

bjj::harness::RunConfig make_config(const CommonArgs& a) {
    bjj::harness::RunConfig cfg;
    cfg.params = make_params(a);
    cfg.prep = bjj::model::Preparation::parse(a.prep);
    cfg.horizon = a.T;
    cfg.dt = a.dt;
    cfg.ensemble_size = a.size;
    cfg.seed = a.seed;
    cfg.out_dir = a.out;
    cfg.grid = a.grid;
    cfg.threads = a.threads;
    return cfg;
}

void report(const std::vector<std::string>& files) {
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-site Bose-Hubbard dynamics toolkit"};
    app.set_version_flag("--version", bjj::kVersion);
    app.set_config("--config", "", "key = value file with the same names as the flags");
    app.require_subcommand(1);

    CommonArgs a;
    std::string fit_out = "data/fitted_constants.json";
    int fig_index = 1;
    bool quick = false;
    double wigner_tau = -1.0;

    auto* c_spectrum = app.add_subcommand("spectrum", "exact eigenvalues and parities");
    add_common(c_spectrum, a);
    auto* c_wkb = app.add_subcommand("wkb", "semiclassical level ladder and fixed points");
    add_common(c_wkb, a);
    auto* c_ldos = app.add_subcommand("ldos", "exact and semiclassical level weights");
    add_common(c_ldos, a);
    auto* c_evolve = app.add_subcommand("evolve", "quantum Bloch-vector series");
    add_common(c_evolve, a);
    auto* c_ens = app.add_subcommand("ensemble", "classical-cloud series and histograms");
    add_common(c_ens, a);
    auto* c_wigner = app.add_subcommand("wigner", "phase-space distribution on a mesh");
    add_common(c_wigner, a);
    c_wigner->add_option("--tau", wigner_tau, "evolve the state to this time first (<0: none)");
    auto* c_sweep = app.add_subcommand("sweep", "grid of quantum runs over N and u/N");
    add_common(c_sweep, a);
    std::string sweep_n = "100,500,1000", sweep_x = "0.02,0.05,0.1,0.2,0.5";
    std::string sweep_preps = "zero,pi,edge,twinfock";
    c_sweep->add_option("--N-list", sweep_n, "comma-separated particle counts");
    c_sweep->add_option("--uN-list", sweep_x, "comma-separated u/N values");
    c_sweep->add_option("--preps", sweep_preps, "comma-separated preparations");
    auto* c_fig = app.add_subcommand("fig", "emit the data set behind one figure");
    c_fig->add_option("index", fig_index, "figure index 1..8")->required();
    c_fig->add_option("--out", a.out, "output directory");
    c_fig->add_flag("--quick", quick, "smaller grids and ensembles");
    c_fig->add_option("--threads", a.threads, "worker threads");
    auto* c_fit = app.add_subcommand("fit-constants", "refit the frozen calibration constants");
    add_common(c_fit, a);
    c_fit->add_option("--write", fit_out, "constants file to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        bjj::harness::apply_threads(a.threads);
        if (c_spectrum->parsed()) {
            const auto p = make_params(a);
            const auto spec = bjj::model::diagonalize(p);
            bjj::io::Csv csv({"nu", "energy", "parity"});
            for (int i = 0; i < spec.dim(); ++i)
                csv.row({std::to_string(i), bjj::io::Csv::format(spec.energies[i]),
                         std::to_string(spec.has_parity() ? spec.parity[i] : 0)});
            bjj::io::ensure_dir(a.out);
            const std::string path = a.out + "/spectrum.csv";
            bjj::io::atomic_write(path, csv.str());
            auto j = bjj::io::sidecar_base(p);
            bjj::io::write_sidecar(a.out + "/spectrum.json", std::move(j), 0.0);
            report({path, a.out + "/spectrum.json"});
        } else if (c_wkb->parsed()) {
            const auto p = make_params(a);
            const auto fps = bjj::wkb::find_fixed_points(p);
            const auto ladder = bjj::wkb::wkb_levels(p);
            bjj::io::ensure_dir(a.out);
            bjj::io::Csv csv({"nu", "energy", "omega", "region", "near_separatrix"});
            for (const auto& lv : ladder.levels)
                csv.row({std::to_string(lv.index), bjj::io::Csv::format(lv.energy),
                         bjj::io::Csv::format(lv.omega),
                         lv.region == bjj::wkb::WkbLevel::Region::Sea ? "sea" : "island",
                         lv.near_separatrix ? "1" : "0"});
            const std::string path = a.out + "/wkb_levels.csv";
            bjj::io::atomic_write(path, csv.str());
            auto j = bjj::io::sidecar_base(p);
            j["nu_x"] = ladder.nu_x;
            j["sea_count"] = ladder.sea_count;
            j["island_pairs"] = ladder.island_pairs;
            if (fps.has_separatrix) {
                j["fixed_points"] = {{"theta_minus", fps.theta_minus},
                                     {"theta_x", fps.theta_x},
                                     {"theta_1", fps.theta_1},
                                     {"theta_2", fps.theta_2},
                                     {"theta_1p", fps.theta_1p},
                                     {"theta_2p", fps.theta_2p},
                                     {"A_c", fps.A_c}};
            }
            bjj::io::write_sidecar(a.out + "/wkb_levels.json", std::move(j), 0.0);
            report({path, a.out + "/wkb_levels.json"});
        } else if (c_ldos->parsed()) {
            const auto p = make_params(a);
            const auto prep = bjj::model::Preparation::parse(a.prep);
            const auto spec = bjj::model::diagonalize(p);
            const auto exact = bjj::model::ldos_quantum(bjj::model::prepare(p, prep), spec);
            bjj::wkb::ActionTable::BuildOptions opt;
            opt.radius = bjj::wkb::RadiusConvention::HalfInteger;
            const auto table = bjj::wkb::ActionTable::build(p, opt);
            const auto semi = bjj::analytics::ldos_semiclassical(prep, spec, table);
            bjj::io::ensure_dir(a.out);
            bjj::io::Csv csv({"nu", "energy", "exact", "semiclassical", "parity"});
            for (int i = 0; i < spec.dim(); ++i)
                csv.row({std::to_string(i), bjj::io::Csv::format(spec.energies[i]),
                         bjj::io::Csv::format(exact.weights[i]),
                         bjj::io::Csv::format(semi.weights[i]),
                         std::to_string(spec.has_parity() ? spec.parity[i] : 0)});
            const std::string path = a.out + "/ldos.csv";
            bjj::io::atomic_write(path, csv.str());
            auto j = bjj::io::sidecar_base(p);
            j["preparation"] = prep.name();
            j["participation_exact"] = exact.participation();
            j["participation_semiclassical"] = semi.participation();
            j["energy_width_exact"] = exact.energy_width();
            bjj::io::write_sidecar(a.out + "/ldos.json", std::move(j), 0.0);
            report({path, a.out + "/ldos.json"});
        } else if (c_evolve->parsed()) {
            const auto res = bjj::harness::run_quantum(make_config(a));
            report(res.files);
        } else if (c_ens->parsed()) {
            const auto res = bjj::harness::run_ensemble(make_config(a), true, true);
            report(res.files);
        } else if (c_wigner->parsed()) {
            const auto p = make_params(a);
            const auto prep = bjj::model::Preparation::parse(a.prep);
            auto state = bjj::model::prepare(p, prep);
            if (wigner_tau >= 0)
                state = bjj::model::evolve(state, bjj::model::diagonalize(p), wigner_tau);
            const auto grid = bjj::wigner::SphereGrid::uniform(a.grid, a.grid);
            const auto field = bjj::wigner::state_to_wigner(state, grid);
            bjj::io::ensure_dir(a.out);
            bjj::io::Csv csv({"phi", "cos_theta", "n", "value"});
            for (int i = 0; i < grid.n_mu(); ++i)
                for (int k = 0; k < grid.n_phi(); ++k)
                    csv.row_values({grid.phi[k], grid.mu[i], p.spin_j() * grid.mu[i],
                                    field.at(i, k)});
            const std::string path = a.out + "/wigner.csv";
            bjj::io::atomic_write(path, csv.str());
            auto j = bjj::io::sidecar_base(p);
            j["preparation"] = prep.name();
            j["grid"] = a.grid;
            j["normalization"] = "int rho dOmega/h = 1";
            j["hermiticity_residual"] = field.hermiticity_residual;
            if (wigner_tau >= 0) j["tau"] = wigner_tau;
            bjj::io::write_sidecar(a.out + "/wigner.json", std::move(j), 0.0);
            report({path, a.out + "/wigner.json"});
        } else if (c_sweep->parsed()) {
            bjj::harness::SweepConfig sc;
            auto split = [](const std::string& text) {
                std::vector<std::string> parts;
                size_t pos = 0;
                while (pos <= text.size()) {
                    const auto comma = text.find(',', pos);
                    parts.push_back(text.substr(pos, comma - pos));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
                return parts;
            };
            for (const auto& s : split(sweep_n)) sc.particle_counts.push_back(std::stoi(s));
            for (const auto& s : split(sweep_x)) sc.u_over_n.push_back(std::stod(s));
            for (const auto& s : split(sweep_preps))
                sc.preps.push_back(bjj::model::Preparation::parse(s));
            sc.K = a.K;
            sc.out_dir = a.out;
            sc.seed = a.seed;
            const auto rows = bjj::harness::run_sweep(sc);
            std::printf("sweep finished: %zu points\n", rows.size());
            report({a.out + "/sweep.csv"});
        } else if (c_fig->parsed()) {
            report(bjj::harness::run_figure(fig_index, a.out, quick));
        } else if (c_fit->parsed()) {
            bjj::constants::Fitted f = bjj::constants::fitted();
            {
                const auto p = bjj::DimerParams::scaled(100, 4.0);
                const auto spec = bjj::model::diagonalize(p);
                f.separatrix_log_b = bjj::wkb::fit_log_correction_b(p, spec.energies);
                std::printf("separatrix_log_b = %.6f\n", f.separatrix_log_b);
            }
            {
                // number-squeezed branch prefactor, swept at N = 1000
                double acc = 0;
                int count = 0;
                for (double x : {1.0, 2.0, 5.0, 10.0}) {
                    const auto p = bjj::DimerParams::scaled(1000, 1000.0 * x);
                    bjj::harness::RunConfig cfg;
                    cfg.params = p;
                    cfg.prep = bjj::model::Preparation::zero();
                    const auto res = bjj::harness::run_quantum(cfg, false);
                    const double base = 2.0 * p.U * std::sqrt(static_cast<double>(p.N));
                    acc += res.stats.dominant_frequency / base;
                    ++count;
                    std::printf("  u/N=%g: observed=%g, observed/(2 U sqrt(N))=%g\n", x,
                                res.stats.dominant_frequency,
                                res.stats.dominant_frequency / base);
                }
                f.phase_diffusion_prefactor = acc / count;
                std::printf("phase_diffusion_prefactor = %.6f\n", f.phase_diffusion_prefactor);
            }
            f.version += 0;
            bjj::constants::write_file(fit_out, f);
            std::printf("wrote %s\n", fit_out.c_str());
        }
    } catch (const bjj::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const bjj::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
