// Timing comparison of the serial reference implementations against the
// OpenMP-parallel kernels for the two embarrassingly parallel analyses:
// the phase portrait and the gain-boundary curve. Prints a table and the
// speedup ratios; makes no correctness claims (the unit suite asserts the
// two policies produce bit-identical results).

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cdroop/scenario.hpp"
#include "cdroop/sweep.hpp"

using namespace cdroop;

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double time_seconds(F&& work) {
    const auto t0 = clock_type::now();
    work();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run serially\n\n");
#endif

    // resistive weak grid after the dip: every cell integrates 20 s onto the
    // limit cycle, a uniform and fairly heavy per-cell workload
    SystemParams cycling = find_preset("caseIII_cycle")->params;
    cycling.grid.v_g = 0.5;
    PhasePortraitConfig portrait_cfg;
    portrait_cfg.grid_n = 24;

    PhasePortrait portrait_serial, portrait_parallel;
    const double t_portrait_serial = time_seconds([&] {
        portrait_serial = phase_portrait(cycling, portrait_cfg, RunPolicy::serial);
    });
    const double t_portrait_parallel = time_seconds([&] {
        portrait_parallel = phase_portrait(cycling, portrait_cfg, RunPolicy::parallel);
    });

    // gain boundary across a range of amplitude gains: one bisection column
    // of dip simulations per alpha
    const SystemParams base = find_preset("caseII_boundary")->params;
    std::vector<double> alphas;
    for (int k = 0; k < 8; ++k) alphas.push_back(0.5 + 0.5 * k);
    BoundarySweepConfig sweep_cfg;
    sweep_cfg.integrator.t_end = 3.0;
    sweep_cfg.eta_lo_pu = 0.02;
    sweep_cfg.eta_hi_pu = 0.3;

    BoundaryCurve curve_serial, curve_parallel;
    const double t_curve_serial = time_seconds([&] {
        curve_serial = boundary_curve(base, alphas, sweep_cfg, true, RunPolicy::serial);
    });
    const double t_curve_parallel = time_seconds([&] {
        curve_parallel =
            boundary_curve(base, alphas, sweep_cfg, true, RunPolicy::parallel);
    });

    std::printf("%-28s %10s %10s %8s\n", "workload", "serial", "parallel", "speedup");
    std::printf("%-28s %9.3fs %9.3fs %7.2fx\n", "phase portrait 24x24, 20 s",
                t_portrait_serial, t_portrait_parallel,
                t_portrait_serial / t_portrait_parallel);
    std::printf("%-28s %9.3fs %9.3fs %7.2fx\n", "boundary curve, 8 gains",
                t_curve_serial, t_curve_parallel, t_curve_serial / t_curve_parallel);

    std::printf("\nportrait cells: %d cycle / %d converged / %d skipped\n",
                portrait_parallel.limit_cycles, portrait_parallel.converged,
                portrait_parallel.skipped);
    std::printf("boundary at alpha = %.1f: %.4f of nominal frequency\n", alphas.front(),
                curve_parallel.eta_empirical.front() / base.omega0());
    return 0;
}
