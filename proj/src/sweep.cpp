#include "cdroop/sweep.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cdroop/certify.hpp"
#include "cdroop/equilibrium.hpp"
#include "cdroop/perturbation.hpp"

namespace cdroop {

namespace {

// One boundary probe: does the dip scenario settle at this gain?
bool probe_converges(const SystemParams& base, double eta, const BoundarySweepConfig& cfg) {
    SystemParams params = base;
    params.ctrl.eta = eta;
    const auto start = select_operating_point(params, equilibria(params));
    if (!start) return false;

    IntegratorConfig icfg = cfg.integrator;
    const std::vector<Event> events = {{cfg.dip_time, "v_g", cfg.dip_value}};
    const Trajectory traj = integrate(params, cfg.order,
                                      embed_equilibrium(params, *start, cfg.order), icfg,
                                      events);
    return classify(traj, cfg.classifier).outcome == Outcome::converged;
}

struct EmpiricalEstimate {
    double eta = 0.0;
    bool valid = false;
    std::int64_t simulations = 0;
};

// Fixed probe ladder, narrowed by a factor of kProbes + 1 per round. The
// probe positions do not depend on the run policy or thread count, so serial
// and parallel runs refine through identical gains.
EmpiricalEstimate empirical_boundary(const SystemParams& base,
                                     const BoundarySweepConfig& cfg, RunPolicy policy) {
    EmpiricalEstimate res;
    const double w0 = base.omega0();
    double lo = cfg.eta_lo_pu * w0;
    double hi = cfg.eta_hi_pu * w0;

    const bool lo_ok = probe_converges(base, lo, cfg);
    const bool hi_ok = probe_converges(base, hi, cfg);
    res.simulations += 2;
    res.valid = lo_ok && !hi_ok;
    if (!res.valid) {
        // No transition inside the bracket; report the end it collapsed to.
        res.eta = lo_ok ? hi : lo;
        return res;
    }

    constexpr int kProbes = 8;
    const double tol = cfg.tol_pu * w0;
    while (hi - lo > tol) {
        std::array<bool, kProbes> ok{};
        const double span = hi - lo;
        const bool use_threads = policy == RunPolicy::parallel;
        (void)use_threads;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (use_threads)
#endif
        for (int i = 0; i < kProbes; ++i)
            ok[i] = probe_converges(base, lo + span * (i + 1) / (kProbes + 1), cfg);
        res.simulations += kProbes;

        int first_bad = 0;
        while (first_bad < kProbes && ok[first_bad]) ++first_bad;
        const double new_lo =
            first_bad == 0 ? lo : lo + span * first_bad / (kProbes + 1);
        const double new_hi =
            first_bad == kProbes ? hi : lo + span * (first_bad + 1) / (kProbes + 1);
        lo = new_lo;
        hi = new_hi;
    }
    res.eta = 0.5 * (lo + hi);
    return res;
}

}  // namespace

double analytic_gain_bound(const SystemParams& params_in, bool* feasible) {
    if (feasible) *feasible = false;
    SystemParams params = params_in;
    if (!(params.grid.r_g > 0.0)) return 0.0;

    const double coupling =
        (params.l_g_seconds() / params.grid.r_g) * params.y_mat().spectral_norm();
    double eta = params.ctrl.eta;
    for (int it = 0; it < 100; ++it) {
        params.ctrl.eta = eta;
        const auto point = select_operating_point(params, equilibria(params));
        if (!point) return 0.0;
        const CascadeCoefficients k = cascade_coefficients(params, *point, 3.0);
        if (!(k.alpha1 > 0.0)) return 0.0;
        const double bound = k.alpha1 / (coupling * (k.alpha1 + k.c_eps));
        if (std::abs(bound - eta) <= 1e-10 * std::max(1.0, bound)) {
            if (feasible) *feasible = true;
            return bound;
        }
        eta = bound;
    }
    return 0.0;
}

BoundaryResult stability_boundary(const SystemParams& base, const BoundarySweepConfig& cfg,
                                  RunPolicy policy) {
    base.validate();
    BoundaryResult res;

    SystemParams post_dip = base;
    post_dip.grid.v_g = cfg.dip_value;
    res.eta_analytic = analytic_gain_bound(post_dip, &res.analytic_feasible);

    const EmpiricalEstimate emp = empirical_boundary(base, cfg, policy);
    res.eta_empirical = emp.eta;
    res.bracket_valid = emp.valid;
    res.simulations += emp.simulations;
    return res;
}

BoundaryCurve boundary_curve(const SystemParams& base, const std::vector<double>& alpha_grid,
                             const BoundarySweepConfig& cfg, BoundaryMode mode,
                             RunPolicy policy) {
    base.validate();
    for (double a : alpha_grid)
        if (!(a > 0.0))
            throw std::invalid_argument("boundary_curve: alpha grid must be positive");

    BoundaryCurve curve;
    curve.order = cfg.order;
    const int n = static_cast<int>(alpha_grid.size());
    curve.alpha = alpha_grid;
    curve.eta_analytic.assign(n, 0.0);
    curve.eta_empirical.assign(n, 0.0);
    curve.analytic_valid.assign(n, 0);
    curve.empirical_valid.assign(n, 0);

    // Columns are independent; parallelism lives here, so each column runs
    // its probe ladder serially.
    const bool use_threads = policy == RunPolicy::parallel;
    (void)use_threads;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (use_threads)
#endif
    for (int i = 0; i < n; ++i) {
        SystemParams column = base;
        column.ctrl.alpha = alpha_grid[i];
        if (mode != BoundaryMode::empirical) {
            SystemParams post_dip = column;
            post_dip.grid.v_g = cfg.dip_value;
            bool ok = false;
            curve.eta_analytic[i] = analytic_gain_bound(post_dip, &ok);
            curve.analytic_valid[i] = ok ? 1 : 0;
        }
        if (mode != BoundaryMode::analytic) {
            const EmpiricalEstimate emp =
                empirical_boundary(column, cfg, RunPolicy::serial);
            curve.eta_empirical[i] = emp.eta;
            curve.empirical_valid[i] = emp.valid ? 1 : 0;
        }
    }
    return curve;
}

PhasePortrait phase_portrait(const SystemParams& params, const PhasePortraitConfig& cfg,
                             RunPolicy policy) {
    params.validate();
    PhasePortrait out;
    out.grid_n = cfg.grid_n;
    out.cells.resize(static_cast<std::size_t>(cfg.grid_n) * cfg.grid_n);

    const EquilibriumSet eqs = equilibria(params);
    const double v_m = voltage_bound(params);
    const double step = cfg.grid_n > 1 ? (cfg.hi - cfg.lo) / (cfg.grid_n - 1) : 0.0;

    const bool use_threads = policy == RunPolicy::parallel;
    (void)use_threads;
    const int total = cfg.grid_n * cfg.grid_n;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (use_threads)
#endif
    for (int idx = 0; idx < total; ++idx) {
        PortraitCell& cell = out.cells[idx];
        const int ix = idx % cfg.grid_n;
        const int iy = idx / cfg.grid_n;
        cell.start = Vec2{cfg.lo + step * ix, cfg.lo + step * iy};

        bool excluded = false;
        for (const auto& p : eqs.points)
            if ((cell.start - p.v_rect).norm() < cfg.exclusion_radius) excluded = true;
        if (excluded) {
            cell.skipped = true;
            continue;
        }

        const std::vector<double> x0 = {cell.start.d, cell.start.q};
        const Trajectory traj =
            integrate(params, ModelOrder::second, x0, cfg.integrator, {});
        cell.result = classify(traj, cfg.classifier);

        // Decimated track for plotting, first and last samples always kept;
        // never longer than path_samples.
        const std::size_t ns = traj.samples();
        const std::size_t cap = static_cast<std::size_t>(std::max(2, cfg.path_samples));
        const std::size_t stride =
            std::max<std::size_t>(1, (ns - 1 + cap - 2) / (cap - 1));
        for (std::size_t i = 0; i < ns; i += stride)
            cell.path.push_back(Vec2{traj.sample(i)[kVhat], traj.sample(i)[kVhat + 1]});
        if ((ns - 1) % stride != 0)
            cell.path.push_back(
                Vec2{traj.sample(ns - 1)[kVhat], traj.sample(ns - 1)[kVhat + 1]});

        // Invariance check against the voltage bound: once inside, stay.
        bool entered = false;
        for (std::size_t i = 0; i < traj.samples(); ++i) {
            const double nv = std::hypot(traj.sample(i)[kVhat], traj.sample(i)[kVhat + 1]);
            if (entered)
                cell.bound_violation = std::max(cell.bound_violation, nv - v_m);
            else if (nv <= v_m)
                entered = true;
        }
    }

    for (const auto& cell : out.cells) {
        if (cell.skipped) {
            ++out.skipped;
            continue;
        }
        switch (cell.result.outcome) {
            case Outcome::converged: ++out.converged; break;
            case Outcome::limit_cycle: ++out.limit_cycles; break;
            case Outcome::diverged: ++out.diverged; break;
            case Outcome::undecided: ++out.undecided; break;
        }
    }
    return out;
}

}  // namespace cdroop
