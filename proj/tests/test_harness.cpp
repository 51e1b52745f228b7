#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "bjj/errors.hpp"
#include "bjj/harness.hpp"
#include "bjj/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bjj;
using namespace bjj::harness;

TEST_CASE("fft against closed-form transforms") {
    std::vector<std::complex<double>> a(8, 0.0);
    a[1] = 1.0;  // delta at n=1: F_k = e^{-2pi i k/8}
    auto b = a;
    fft_radix2(b, false);
    for (int k = 0; k < 8; ++k) {
        const std::complex<double> want(std::cos(2 * M_PI * k / 8.0), -std::sin(2 * M_PI * k / 8.0));
        CHECK(std::abs(b[k] - want) < 1e-12);
    }
    fft_radix2(b, true);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(b[k] - a[k]) < 1e-12);
    CHECK_THROWS_AS(([&] {
                        std::vector<std::complex<double>> c(6);
                        fft_radix2(c, false);
                    }()),
                    ConfigError);
}

TEST_CASE("series analysis") {
    SUBCASE("constant series has zero fluctuation power") {
        std::vector<double> v(2048, 3.7);
        const auto st = analyze_series(v, 0.1);
        CHECK(st.mean == doctest::Approx(3.7));
        CHECK(st.rms == doctest::Approx(0.0).scale(1).epsilon(1e-12));
        CHECK(st.dominant_frequency == 0.0);
    }
    SUBCASE("pure cosine: RMS and a single peak") {
        const double amp = 0.8, omega = 2.31, dt = 0.05;
        std::vector<double> v(6000);
        for (size_t i = 0; i < v.size(); ++i) v[i] = 0.4 + amp * std::cos(omega * dt * i + 0.3);
        const auto st = analyze_series(v, dt);
        CHECK(st.rms == doctest::Approx(amp / std::sqrt(2.0)).epsilon(0.01));
        CHECK(st.peak_frequency == doctest::Approx(omega).epsilon(0.01));
        CHECK(st.dominant_frequency == doctest::Approx(omega).epsilon(0.02));
        CHECK(st.parseval_ratio == doctest::Approx(1.0).epsilon(0.02));
        CHECK(st.mean == doctest::Approx(0.4).epsilon(1e-3));
    }
    SUBCASE("short series are rejected") {
        std::vector<double> v(900, 0.0);
        CHECK_THROWS_AS((void)analyze_series(v, 0.1), ConfigError);
    }
}

TEST_CASE("run configuration rules") {
    RunConfig cfg;
    cfg.params = DimerParams::scaled(40, 5.0);
    cfg.prep = model::Preparation::zero();
    SUBCASE("defaults pass validation") {
        cfg.finalize();
        CHECK(cfg.dt > 0);
        CHECK(cfg.horizon > 0);
        CHECK(cfg.dt < M_PI / (2.0 * cfg.max_expected_frequency()));
    }
    SUBCASE("nyquist guard") {
        cfg.dt = 1.0;  // far beyond the guard at u = 5
        CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    }
    SUBCASE("coverage guard") {
        cfg.horizon = 1.0;
        CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    }
}

TEST_CASE("quantum run writes a reproducible artifact set") {
    const std::string dir = "test_out_harness";
    std::filesystem::remove_all(dir);
    RunConfig cfg;
    cfg.params = DimerParams::scaled(16, 3.0);
    cfg.prep = model::Preparation::zero();
    cfg.horizon = 220.0;
    cfg.dt = 0.18;
    cfg.out_dir = dir;
    const auto res = run_quantum(cfg);
    REQUIRE(res.files.size() == 4);
    for (const auto& f : res.files) CHECK(std::filesystem::exists(f));

    // sidecar carries the config and derived constants
    std::ifstream in(res.files.back());
    nlohmann::json j;
    in >> j;
    CHECK(j["params"]["N"] == 16);
    CHECK(j["derived"]["u"] == doctest::Approx(3.0));
    CHECK(j.contains("stats"));
    CHECK(j["version"].is_string());

    // byte-identical rerun across thread counts
    auto slurp = [](const std::string& path) {
        std::ifstream s(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(s)), std::istreambuf_iterator<char>());
    };
    const auto series_a = slurp(res.files[0]);
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(2);
#endif
    const auto res2 = run_quantum(cfg);
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
    CHECK(slurp(res2.files[0]) == series_a);
    std::filesystem::remove_all(dir);
}

TEST_CASE("ensemble run emits histograms and seeds the sidecar") {
    const std::string dir = "test_out_harness_ens";
    std::filesystem::remove_all(dir);
    RunConfig cfg;
    cfg.params = DimerParams::scaled(16, 3.0);
    cfg.prep = model::Preparation::twin_fock();
    cfg.horizon = 80.0;
    cfg.dt = 0.05;
    cfg.ensemble_size = 4000;
    cfg.seed = 777;
    cfg.out_dir = dir;
    const auto res = run_ensemble(cfg, true, true);
    bool has_hist = false;
    for (const auto& f : res.files) has_hist |= f.find("hist_n") != std::string::npos;
    CHECK(has_hist);
    std::ifstream in(res.files.back());
    nlohmann::json j;
    in >> j;
    CHECK(j["ensemble"]["seed"] == 777);
    CHECK(j["ensemble"]["max_energy_drift_NK"].get<double>() < 1e-8);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps record failures and continue") {
    const std::string dir = "test_out_sweep";
    std::filesystem::remove_all(dir);
    SweepConfig sc;
    sc.particle_counts = {12};
    sc.u_over_n = {0.125, 0.5};  // u = 1.5 has no phi=0 separatrix crossing
    sc.preps = {model::Preparation::zero(), model::Preparation::edge()};
    sc.out_dir = dir;
    sc.label = "mini";
    const auto rows = run_sweep(sc);
    REQUIRE(rows.size() == 4);
    int failures = 0, successes = 0;
    for (const auto& r : rows) {
        if (r.ok) ++successes;
        else {
            ++failures;
            CHECK_FALSE(r.message.empty());
        }
    }
    CHECK(successes >= 2);
    CHECK(failures >= 1);
    CHECK(std::filesystem::exists(dir + "/mini.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("csv quoting follows the rfc rules") {
    io::Csv csv({"a", "b"});
    csv.row({"plain", "needs,\"quote\"\nhere"});
    const auto s = csv.str();
    CHECK(s.find("\"needs,\"\"quote\"\"\nhere\"") != std::string::npos);
}
