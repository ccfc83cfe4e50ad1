// Acceptance suite for the converter toolkit: nine end-to-end criteria, one
// [PASS]/[FAIL] line each, nonzero exit when any fails. Tolerances are pinned
// inline next to the checks they guard; criteria with a runtime budget also
// fail when they blow it.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdroop/certify.hpp"
#include "cdroop/classify.hpp"
#include "cdroop/dynamics.hpp"
#include "cdroop/equilibrium.hpp"
#include "cdroop/integrate.hpp"
#include "cdroop/observables.hpp"
#include "cdroop/perturbation.hpp"
#include "cdroop/scenario.hpp"
#include "cdroop/sweep.hpp"

using namespace cdroop;

namespace {

// Same parameter domain the unit suite samples: impedance magnitude/angle,
// grid voltage, rotation angle, gains, and setpoints all over their
// physically sensible ranges.
SystemParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemParams p;
    const double z_mag = 0.05 + 1.45 * u(rng);
    const double z_ang = 0.5 * std::numbers::pi * u(rng);
    p.grid.r_g = z_mag * std::cos(z_ang);
    p.grid.l_g = z_mag * std::sin(z_ang);
    p.grid.v_g = 0.05 + 1.15 * u(rng);
    p.ctrl.phi = 0.5 * std::numbers::pi * u(rng);
    p.ctrl.alpha = 0.05 + 4.95 * u(rng);
    p.ctrl.eta = (0.01 + 0.09 * u(rng)) * p.omega0();
    p.ctrl.p_star = 2.0 * u(rng) - 1.0;
    p.ctrl.q_star = 2.0 * u(rng) - 1.0;
    return p;
}

double oscillator_residual(const SystemParams& p, const EquilibriumPoint& pt) {
    const std::vector<double> x = embed_equilibrium(p, pt, ModelOrder::second);
    std::array<double, 2> dx{};
    rhs_second_order(p, x.data(), dx.data());
    return std::hypot(dx[0], dx[1]);
}

// criterion 1: a steady state exists for every sampled parameter set, and
// every reported point zeroes the oscillator field to 1e-10
bool steady_state_existence() {
    constexpr int kDraws = 1000;
    constexpr double kResidualTol = 1e-10;
    constexpr double kBudgetSeconds = 10.0;
    const auto t0 = std::chrono::steady_clock::now();

    std::mt19937_64 rng(0x5eedu);
    bool ok = true;
    double worst = 0.0;
    for (int draw = 0; draw < kDraws; ++draw) {
        const SystemParams p = random_params(rng);
        const EquilibriumSet set = equilibria(p);
        if (set.points.empty()) {
            std::printf("         draw %d produced no steady state\n", draw);
            ok = false;
            continue;
        }
        for (const EquilibriumPoint& pt : set.points)
            worst = std::max(worst, oscillator_residual(p, pt));
    }
    if (worst > kResidualTol) {
        std::printf("         worst steady-state residual %.3e > %.1e\n", worst,
                    kResidualTol);
        ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > kBudgetSeconds) {
        std::printf("         runtime %.1f s over the %.0f s budget\n", elapsed,
                    kBudgetSeconds);
        ok = false;
    }
    return ok;
}

// criterion 2: the zero-setpoint weak-grid design where classical droop has
// no steady state while complex droop keeps one and rides a start from the
// grid voltage into it within five seconds
bool classical_droop_counterexample() {
    const Scenario* preset = find_preset("example3");
    if (!preset) return false;
    const Scenario& s = *preset;
    bool ok = true;

    const EquilibriumSet classical = classical_droop_equilibria(s.params);
    if (!classical.points.empty()) {
        std::printf("         classical droop unexpectedly found %zu point(s)\n",
                    classical.points.size());
        ok = false;
    }
    const EquilibriumSet complex_set = equilibria(s.params);
    if (complex_set.points.empty()) {
        std::printf("         complex droop found no steady state\n");
        ok = false;
        return ok;
    }

    const Trajectory traj =
        integrate(s.params, s.order, initial_state(s), s.integrator, s.events);
    const ClassifyResult res = classify(traj);
    if (res.outcome != Outcome::converged) {
        std::printf("         start from the grid voltage classified %s, not Converged\n",
                    outcome_name(res.outcome));
        ok = false;
    }
    if (traj.t.back() > 5.0 + 1e-9) {
        std::printf("         horizon %.3f s exceeds the 5 s window\n", traj.t.back());
        ok = false;
    }
    return ok;
}

// criterion 3: the reduced-model dip response converges a hair below the
// critical droop gain and not above it, and the bisection sweep puts the
// boundary at 0.100 +- 0.005 of nominal frequency
bool critical_droop_gain() {
    constexpr double kBoundaryCenter = 0.100;
    constexpr double kBoundaryTol = 0.005;
    constexpr double kBudgetSeconds = 60.0;
    const auto t0 = std::chrono::steady_clock::now();

    const Scenario* preset = find_preset("caseII_boundary");
    if (!preset) return false;
    Scenario s = *preset;  // eta = 0.099 * omega0, fourth order, 20 s dip run
    const double w0 = s.params.omega0();
    bool ok = true;

    const Trajectory below =
        integrate(s.params, s.order, initial_state(s), s.integrator, s.events);
    const ClassifyResult res_below = classify(below);
    if (res_below.outcome != Outcome::converged) {
        std::printf("         eta = 0.099 omega0 classified %s, not Converged\n",
                    outcome_name(res_below.outcome));
        ok = false;
    }

    Scenario above = s;
    above.params.ctrl.eta = 0.101 * w0;
    const Trajectory traj_above = integrate(above.params, above.order,
                                            initial_state(above), above.integrator,
                                            above.events);
    const ClassifyResult res_above = classify(traj_above);
    if (res_above.outcome == Outcome::converged) {
        std::printf("         eta = 0.101 omega0 still classified Converged\n");
        ok = false;
    }

    const BoundaryResult bnd = stability_boundary(s.params, BoundarySweepConfig{});
    const double emp_pu = bnd.eta_empirical / w0;
    if (!bnd.bracket_valid) {
        std::printf("         sweep bracket invalid\n");
        ok = false;
    }
    if (std::abs(emp_pu - kBoundaryCenter) > kBoundaryTol) {
        std::printf("         empirical boundary %.6f omega0 outside %.3f +- %.3f\n",
                    emp_pu, kBoundaryCenter, kBoundaryTol);
        ok = false;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > kBudgetSeconds) {
        std::printf("         runtime %.1f s over the %.0f s budget\n", elapsed,
                    kBudgetSeconds);
        ok = false;
    }
    return ok;
}

// criterion 4: the resistive weak grid after the dip has a unique repelling
// steady state, every grid start lands on the limit cycle, the voltage obeys
// its invariant-ball bound, and unit amplitude gain flips the picture
bool limit_cycle_portrait() {
    constexpr double kBoundSlack = 1e-6;
    constexpr double kBudgetSeconds = 120.0;
    const auto t0 = std::chrono::steady_clock::now();

    const Scenario* preset = find_preset("caseIII_cycle");
    if (!preset) return false;
    SystemParams p = preset->params;
    p.grid.v_g = 0.5;  // the post-dip grid the portrait studies
    bool ok = true;

    const EquilibriumSet set = equilibria(p);
    if (!(set.unique && set.discriminant < 0.0)) {
        std::printf("         expected a unique steady state (discriminant %.3e)\n",
                    set.discriminant);
        ok = false;
    }
    if (set.points.size() != 1 || !check_unstable(p, set.points.front()).satisfied) {
        std::printf("         instability certificate not satisfied\n");
        ok = false;
    }

    PhasePortraitConfig pc;
    pc.grid_n = 20;
    const PhasePortrait cycling = phase_portrait(p, pc);
    const int total = pc.grid_n * pc.grid_n;
    if (cycling.limit_cycles + cycling.skipped != total || cycling.limit_cycles == 0) {
        std::printf("         portrait: %d cycle / %d conv / %d div / %d und / %d skip\n",
                    cycling.limit_cycles, cycling.converged, cycling.diverged,
                    cycling.undecided, cycling.skipped);
        ok = false;
    }
    double worst_violation = 0.0;
    for (const PortraitCell& cell : cycling.cells)
        worst_violation = std::max(worst_violation, cell.bound_violation);
    if (worst_violation > kBoundSlack) {
        std::printf("         voltage bound %.6f pu exceeded by %.3e pu\n",
                    voltage_bound(p), worst_violation);
        ok = false;
    }

    SystemParams gentle = p;
    gentle.ctrl.alpha = 1.0;
    const PhasePortrait settling = phase_portrait(gentle, pc);
    if (settling.converged + settling.skipped != total || settling.converged == 0) {
        std::printf("         alpha = 1 portrait: %d cycle / %d conv / %d skip\n",
                    settling.limit_cycles, settling.converged, settling.skipped);
        ok = false;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > kBudgetSeconds) {
        std::printf("         runtime %.1f s over the %.0f s budget\n", elapsed,
                    kBudgetSeconds);
        ok = false;
    }
    return ok;
}

// criterion 5: the islanded oscillator's circular limit cycle matches its
// closed-form squared amplitude, the contracting branch reaches the origin,
// and the boundary-equality branch decays algebraically, not exponentially
bool islanded_cycle_amplitude() {
    constexpr double kRadiusSqRelTol = 1e-3;
    const Scenario* preset = find_preset("offgrid_hopf");
    if (!preset) return false;
    const Scenario& s = *preset;  // alpha = 2, start (1.2, 0), 5 s stationary
    bool ok = true;

    const Kappa k = kappa(s.params);
    const double vstar2 = s.params.ctrl.v_star * s.params.ctrl.v_star;
    const double closed_r2 = vstar2 * (k.kr + s.params.ctrl.alpha) / s.params.ctrl.alpha;

    const OffGridPrediction pred = off_grid_prediction(s.params);
    if (!pred.has_limit_cycle ||
        std::abs(pred.cycle_radius * pred.cycle_radius - closed_r2) > 1e-12) {
        std::printf("         prediction radius^2 %.12f vs closed form %.12f\n",
                    pred.cycle_radius * pred.cycle_radius, closed_r2);
        ok = false;
    }

    const Trajectory traj = integrate(s.params, s.order, initial_state(s),
                                      s.integrator, s.events, s.stationary_frame);
    const ClassifyResult res = classify(traj);
    if (res.outcome != Outcome::limit_cycle) {
        std::printf("         cycle branch classified %s\n", outcome_name(res.outcome));
        ok = false;
    } else {
        const double detected_r2 = res.cycle_radius * res.cycle_radius;
        if (std::abs(detected_r2 - closed_r2) > kRadiusSqRelTol * closed_r2) {
            std::printf("         detected radius^2 %.6f vs closed form %.6f\n",
                        detected_r2, closed_r2);
            ok = false;
        }
    }

    // contracting branch: kr + alpha < 0, exponential decay to the origin
    Scenario gas = s;
    gas.params.ctrl.alpha = 0.5;
    const Trajectory decay = integrate(gas.params, gas.order, initial_state(gas),
                                       gas.integrator, gas.events, gas.stationary_frame);
    const double* xg = decay.sample(decay.samples() - 1);
    const double r_gas = std::hypot(xg[0], xg[1]);
    if (!off_grid_prediction(gas.params).converges_to_origin || r_gas > 1e-6) {
        std::printf("         contracting branch radius %.3e after %.1f s\n", r_gas,
                    decay.t.back());
        ok = false;
    }

    // boundary equality: kr + alpha = 0, the amplitude follows the algebraic
    // law r0 / sqrt(1 + 2 eta alpha r0^2 t / vstar^2)
    Scenario marginal = s;
    marginal.params.ctrl.alpha = 1.0;  // kr = -1 for this design
    const OffGridPrediction mpred = off_grid_prediction(marginal.params);
    if (!mpred.converges_to_origin || !mpred.algebraic_decay) {
        std::printf("         boundary branch not flagged as algebraic decay\n");
        ok = false;
    }
    const Trajectory slow = integrate(marginal.params, marginal.order,
                                      initial_state(marginal), marginal.integrator,
                                      marginal.events, marginal.stationary_frame);
    const double r0 = 1.2;
    const double eta = marginal.params.ctrl.eta;
    const double alpha = marginal.params.ctrl.alpha;
    bool shrinking = true;
    double prev = r0 + 1e-12;
    for (double frac : {0.5, 1.0}) {
        const std::size_t i =
            static_cast<std::size_t>(frac * static_cast<double>(slow.samples() - 1));
        const double* xs = slow.sample(i);
        const double r = std::hypot(xs[0], xs[1]);
        const double law = r0 / std::sqrt(1.0 + 2.0 * eta * alpha * r0 * r0 *
                                                    slow.t[i] / vstar2);
        if (std::abs(r - law) > 0.01 * law) {
            std::printf("         boundary branch r(%.2f s) = %.6f vs law %.6f\n",
                        slow.t[i], r, law);
            ok = false;
        }
        shrinking = shrinking && r < prev;
        prev = r;
    }
    if (!shrinking) {
        std::printf("         boundary branch amplitude not decreasing\n");
        ok = false;
    }
    return ok;
}

// criterion 6: the closed-form region radius at scale 7 and its behaviour at
// and beyond the degenerate scale
bool region_radius_rule() {
    bool ok = true;
    if (std::abs(roa_radius(7.0, 1.0) - 1.0) > 1e-10) {
        std::printf("         roa_radius(7, 1) = %.12f, expected 1\n",
                    roa_radius(7.0, 1.0));
        ok = false;
    }
    bool threw = false;
    try {
        (void)roa_radius(3.0, 1.0);
    } catch (const std::domain_error&) {
        threw = true;
    }
    if (!threw) {
        std::printf("         roa_radius(3, 1) did not reject the degenerate scale\n");
        ok = false;
    }
    double prev = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double eps = 3.02 + (25.0 - 3.02) * k / 49.0;
        const double r = roa_radius(eps, 1.0);
        if (!(r > prev)) {
            std::printf("         radius not strictly increasing at scale %.4f\n", eps);
            ok = false;
            break;
        }
        prev = r;
    }
    return ok;
}

// criterion 7: the admissible region-scale range of the half-voltage
// operating point tops out near 11.4 under the outer three conditions, while
// the current-loop condition fails at the stock loop gains
bool region_scale_range() {
    const Scenario* preset = find_preset("example4_roa");
    if (!preset) return false;
    const SystemParams& p = preset->params;  // v_g = 0.5, eta = 0.02 * omega0
    bool ok = true;

    const EquilibriumSet set = equilibria(p);
    const auto pt = select_operating_point(p, set);
    if (!pt) return false;

    const EpsilonRange range = epsilon_range(p, *pt);
    if (!range.feasible || std::abs(range.epsilon_max - 11.4) > 0.2) {
        std::printf("         scale range feasible=%d max=%.4f, expected 11.4 +- 0.2\n",
                    range.feasible ? 1 : 0, range.epsilon_max);
        ok = false;
    }

    const FullOrderCertificate cert = check_full_order(p, *pt, 4.0);
    if (!cert.tuning_feasible.satisfied || !cert.droop_gain_small.satisfied ||
        !cert.voltage_loop_fast.satisfied) {
        std::printf("         outer conditions unexpectedly failed at scale 4\n");
        ok = false;
    }
    if (cert.current_loop_fast.satisfied) {
        std::printf("         current-loop condition passed at the stock gains\n");
        ok = false;
    }
    return ok;
}

// criterion 8: structural identities: analytic Jacobian vs finite
// differences, reduced-order consistency on the fast manifolds, Lyapunov
// decay whenever the global certificate holds, the incremental cubic
// inequality, and the certificate implication chain
bool structural_identities() {
    bool ok = true;
    std::mt19937_64 rng(0xacce57u);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    // analytic Jacobian vs central differences, both frames
    double worst_fd = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const SystemParams p = random_params(rng);
        const Vec2 v{u(rng), u(rng)};
        for (bool stationary : {false, true}) {
            const Mat2 jac = oscillator_jacobian(p, v, stationary);
            const double h = 1e-6;
            double fd[2][2];
            for (int col = 0; col < 2; ++col) {
                double xp[2] = {v.d, v.q};
                double xm[2] = {v.d, v.q};
                xp[col] += h;
                xm[col] -= h;
                double fp[2], fm[2];
                if (stationary) {
                    rhs_off_grid(p, xp, fp);
                    rhs_off_grid(p, xm, fm);
                } else {
                    rhs_second_order(p, xp, fp);
                    rhs_second_order(p, xm, fm);
                }
                fd[0][col] = (fp[0] - fm[0]) / (2.0 * h);
                fd[1][col] = (fp[1] - fm[1]) / (2.0 * h);
            }
            const double scale = std::max({1.0, std::abs(jac.a11), std::abs(jac.a12),
                                           std::abs(jac.a21), std::abs(jac.a22)});
            const double err = std::max({std::abs(fd[0][0] - jac.a11),
                                         std::abs(fd[0][1] - jac.a12),
                                         std::abs(fd[1][0] - jac.a21),
                                         std::abs(fd[1][1] - jac.a22)}) /
                               scale;
            worst_fd = std::max(worst_fd, err);
        }
    }
    if (worst_fd > 1e-6) {
        std::printf("         Jacobian vs finite differences: %.3e relative\n", worst_fd);
        ok = false;
    }

    // reduced orders agree where the appended fast states sit on their
    // quasi-steady values; mismatch normalized by the field magnitude
    double worst_nest = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const SystemParams p = random_params(rng);
        const Vec2 vhat{1.0 + 0.3 * u(rng), 0.3 * u(rng)};
        const Vec2 i = p.y_mat() * (vhat - p.v_g_vec());
        std::array<double, 4> x4{vhat.d, vhat.q, i.d, i.q};
        std::array<double, 4> d4{};
        std::array<double, 2> d2{};
        rhs_fourth_order(p, x4.data(), d4.data());
        rhs_second_order(p, x4.data(), d2.data());
        double field = 1.0;
        for (double v : d2) field = std::max(field, std::abs(v));
        for (int j = 0; j < 2; ++j)
            worst_nest = std::max(worst_nest, std::abs(d4[j] - d2[j]) / field);

        const Vec2 im{0.3 * u(rng), 0.3 * u(rng)};
        std::array<double, 8> x8{vhat.d, vhat.q, im.d, im.q, vhat.d, vhat.q, 0.0, 0.0};
        std::array<double, 8> d8{};
        std::array<double, 4> x4b{vhat.d, vhat.q, im.d, im.q};
        std::array<double, 4> d4b{};
        rhs_eighth_order(p, x8.data(), d8.data());
        rhs_fourth_order(p, x4b.data(), d4b.data());
        field = 1.0;
        for (double v : d4b) field = std::max(field, std::abs(v));
        for (int j = 0; j < 4; ++j)
            worst_nest = std::max(worst_nest, std::abs(d8[j] - d4b[j]) / field);

        const Vec2 v{vhat.d + 0.05 * u(rng), vhat.q + 0.05 * u(rng)};
        const Vec2 zeta_v{0.02 * u(rng), 0.02 * u(rng)};
        const Vec2 i_ref = voltage_loop_reference(p, vhat, im, v, zeta_v);
        std::array<double, 12> x12{vhat.d, vhat.q, im.d,     im.q,
                                   v.d,    v.q,    zeta_v.d, zeta_v.q,
                                   i_ref.d, i_ref.q, 0.0,    0.0};
        std::array<double, 12> d12{};
        std::array<double, 8> x8b{vhat.d, vhat.q, im.d, im.q,
                                  v.d,    v.q,    zeta_v.d, zeta_v.q};
        std::array<double, 8> d8b{};
        rhs_full_order(p, x12.data(), d12.data());
        rhs_eighth_order(p, x8b.data(), d8b.data());
        field = 1.0;
        for (double vv : d8b) field = std::max(field, std::abs(vv));
        for (int j = 0; j < 8; ++j)
            worst_nest = std::max(worst_nest, std::abs(d12[j] - d8b[j]) / field);
    }
    if (worst_nest > 1e-12) {
        std::printf("         order nesting mismatch %.3e relative\n", worst_nest);
        ok = false;
    }

    // energy decay along trajectories whenever the global certificate holds
    int certified_runs = 0;
    for (int draw = 0; draw < 200 && certified_runs < 5; ++draw) {
        const SystemParams p = random_params(rng);
        const EquilibriumSet set = equilibria(p);
        const auto pt = select_operating_point(p, set);
        if (!pt || !check_global(p, *pt).satisfied) continue;
        ++certified_runs;
        std::vector<double> x0 = embed_equilibrium(p, *pt, ModelOrder::second);
        x0[0] += 0.4;
        x0[1] -= 0.3;
        IntegratorConfig cfg;
        cfg.t_end = 1.0;
        cfg.output_dt = 1e-3;
        const Trajectory traj = integrate(p, ModelOrder::second, x0, cfg);
        const LyapunovTrace trace = lyapunov_trace(traj, *pt);
        if (!trace.monotone) {
            std::printf("         energy increased by %.3e under a global certificate\n",
                        trace.max_increase);
            ok = false;
        }
    }
    if (certified_runs < 3) {
        std::printf("         only %d certified draws found for the decay check\n",
                    certified_runs);
        ok = false;
    }

    // incremental cubic inequality over 1e5 random pairs
    int gap_violations = 0;
    std::uniform_real_distribution<double> box(-3.0, 3.0);
    for (int k = 0; k < 100000; ++k) {
        const Vec2 a{box(rng), box(rng)};
        const Vec2 b{box(rng), box(rng)};
        if (amplitude_cubic_gap(a, b) < -1e-9) ++gap_violations;
    }
    if (gap_violations != 0) {
        std::printf("         %d cubic-gap violations in 100000 pairs\n", gap_violations);
        ok = false;
    }

    // implication chain: parameter-only global => unique + pointwise global
    // => local sufficient => Hurwitz linearization
    int chain[4] = {0, 0, 0, 0};
    int chain_violations = 0;
    std::mt19937_64 rng_chain(0xc4a1du);
    for (int draw = 0; draw < 1000; ++draw) {
        const SystemParams p = random_params(rng_chain);
        const EquilibriumSet set = equilibria(p);
        if (check_global_parameter_only(p).satisfied) {
            ++chain[0];
            if (!set.unique) ++chain_violations;
        }
        for (const EquilibriumPoint& pt : set.points) {
            const bool global = check_global(p, pt).satisfied;
            const bool local = check_local_sufficient(p, pt).satisfied;
            const bool hurwitz = check_local_eigenvalues(p, pt).satisfied;
            if (check_global_parameter_only(p).satisfied && !global) ++chain_violations;
            if (global) {
                ++chain[1];
                if (!local) ++chain_violations;
            }
            if (local) {
                ++chain[2];
                if (!hurwitz) ++chain_violations;
            }
            if (hurwitz) ++chain[3];
        }
    }
    if (chain_violations != 0 || chain[0] < 100 || chain[1] < 100) {
        std::printf("         chain violations %d (coverage %d/%d/%d/%d)\n",
                    chain_violations, chain[0], chain[1], chain[2], chain[3]);
        ok = false;
    }
    return ok;
}

// criterion 9: with a slow droop gain the control layers settle inside-out
// (current loop, voltage loop, grid current, droop error); tripling the gain
// breaks the separation between the droop error and the grid current
bool time_scale_separation() {
    const Scenario* slow_preset = find_preset("caseI_slow");
    const Scenario* fast_preset = find_preset("caseI_fast");
    if (!slow_preset || !fast_preset) return false;
    bool ok = true;

    const auto settle_times = [](const Scenario& base) {
        Scenario s = base;
        s.integrator.t_end = 1.5;
        s.integrator.output_dt = 1e-5;
        const Trajectory traj =
            integrate(s.params, s.order, initial_state(s), s.integrator, s.events);
        const ErrorTrace trace = error_coordinates(traj);
        const double t_ref = s.events.front().t;
        return std::array<double, 4>{
            time_to_fraction(trace.t, trace.current_loop, t_ref, 0.1),
            time_to_fraction(trace.t, trace.voltage_loop, t_ref, 0.1),
            time_to_fraction(trace.t, trace.grid_current, t_ref, 0.1),
            time_to_fraction(trace.t, trace.droop, t_ref, 0.1)};
    };

    const std::array<double, 4> slow = settle_times(*slow_preset);
    if (!(slow[0] < slow[1] && slow[1] < slow[2] && slow[2] < slow[3])) {
        std::printf("         slow-gain settle times %.5f / %.5f / %.5f / %.5f s\n",
                    slow[0], slow[1], slow[2], slow[3]);
        ok = false;
    }

    const std::array<double, 4> fast = settle_times(*fast_preset);
    if (!(fast[3] < fast[2])) {
        std::printf("         fast-gain droop settles at %.5f s vs grid current %.5f s\n",
                    fast[3], fast[2]);
        ok = false;
    }
    return ok;
}

struct Criterion {
    const char* name;
    const char* intent;
    bool (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"steady_state_existence", "every sampled parameter set keeps a steady state",
         steady_state_existence},
        {"classical_droop_counterexample",
         "complex droop keeps a weak-grid steady state classical droop loses",
         classical_droop_counterexample},
        {"critical_droop_gain", "dip ride-through flips across the critical gain",
         critical_droop_gain},
        {"limit_cycle_portrait", "post-dip portrait is all limit cycle within the bound",
         limit_cycle_portrait},
        {"islanded_cycle_amplitude", "islanded cycle amplitude matches the closed form",
         islanded_cycle_amplitude},
        {"region_radius_rule", "region radius follows its closed form above scale 3",
         region_radius_rule},
        {"region_scale_range", "admissible region scale tops out near 11.4",
         region_scale_range},
        {"structural_identities", "Jacobian, nesting, decay, and implication checks",
         structural_identities},
        {"time_scale_separation", "control layers settle inside-out at slow droop gain",
         time_scale_separation},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        const bool passed = c.run();
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s - %s (%.1f s)\n", passed ? "PASS" : "FAIL", c.name,
                    c.intent, elapsed);
        if (!passed) ++failed;
    }

    if (failed != 0) {
        std::printf("%d of %zu acceptance criteria failed\n", failed,
                    std::size(criteria));
        return 1;
    }
    std::printf("all %zu acceptance criteria passed\n", std::size(criteria));
    return 0;
}
