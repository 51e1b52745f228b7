// Timings of the OpenMP kernels against their serial reference paths.
// Each kernel pair computes identical results (the unit tests assert
// bit-equality); this target only reports throughput.

#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bjj/ensemble.hpp"
#include "bjj/harness.hpp"
#include "bjj/model.hpp"
#include "bjj/wigner.hpp"
#include "bjj/wkb.hpp"

namespace {

double wall() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return 0;
#endif
}

struct Row {
    std::string name;
    double serial = 0, parallel = 0;
};

void print(const std::vector<Row>& rows) {
    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]", "speedup");
    for (const auto& r : rows)
        std::printf("%-34s %12.3f %12.3f %8.2fx\n", r.name.c_str(), r.serial, r.parallel,
                    r.serial / r.parallel);
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
    if (argc > 1) threads = std::atoi(argv[1]);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    std::printf("threads: %d\n", threads > 0 ? threads : omp_get_max_threads());
#endif
    std::vector<Row> rows;

    {
        Row r{"ensemble propagation  (N=40, 2e4)"};
        const auto p = bjj::DimerParams::scaled(40, 5.0);
        const auto cloud = bjj::ensemble::sample_cloud(bjj::model::Preparation::twin_fock(), p,
                                                       20000, 7);
        std::vector<double> tau;
        for (int i = 0; i <= 400; ++i) tau.push_back(0.05 * i);
        bjj::ensemble::PropagateOptions opt;
        opt.parallel = false;
        double t0 = wall();
        (void)bjj::ensemble::propagate(cloud, tau, opt);
        r.serial = wall() - t0;
        opt.parallel = true;
        t0 = wall();
        (void)bjj::ensemble::propagate(cloud, tau, opt);
        r.parallel = wall() - t0;
        rows.push_back(r);
    }
    {
        Row r{"eigenbasis series     (N=500)"};
        const auto p = bjj::DimerParams::scaled(500, 4.0);
        const auto spec = bjj::model::diagonalize(p);
        const auto st = bjj::model::prepare(p, bjj::model::Preparation::pi());
        std::vector<double> tau;
        for (int i = 0; i < 2048; ++i) tau.push_back(0.15 * i);
        double t0 = wall();
        (void)bjj::model::evolve_bloch_series(st, spec, tau, false);
        r.serial = wall() - t0;
        t0 = wall();
        (void)bjj::model::evolve_bloch_series(st, spec, tau, true);
        r.parallel = wall() - t0;
        rows.push_back(r);
    }
    {
        Row r{"action table          (N=500)"};
        const auto p = bjj::DimerParams::scaled(500, 4.0);
        bjj::wkb::ActionTable::BuildOptions opt;
        opt.parallel = false;
        double t0 = wall();
        (void)bjj::wkb::ActionTable::build(p, opt);
        r.serial = wall() - t0;
        opt.parallel = true;
        t0 = wall();
        (void)bjj::wkb::ActionTable::build(p, opt);
        r.parallel = wall() - t0;
        rows.push_back(r);
    }
    {
        Row r{"phase-space transform (N=40, 512^2)"};
        const auto p = bjj::DimerParams::scaled(40, 5.0);
        const auto st = bjj::model::prepare(p, bjj::model::Preparation::twin_fock());
        const auto grid = bjj::wigner::SphereGrid::uniform(512, 512);
#ifdef _OPENMP
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
#endif
        double t0 = wall();
        (void)bjj::wigner::state_to_wigner(st, grid);
        r.serial = wall() - t0;
#ifdef _OPENMP
        omp_set_num_threads(saved);
#endif
        t0 = wall();
        (void)bjj::wigner::state_to_wigner(st, grid);
        r.parallel = wall() - t0;
        rows.push_back(r);
    }
    print(rows);
    return 0;
}
