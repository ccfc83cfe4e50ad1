#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <vector>

#include "cdroop/certify.hpp"
#include "cdroop/equilibrium.hpp"
#include "cdroop/integrate.hpp"

using namespace cdroop;

namespace {

SystemParams strong_grid(double eta_pu) {
    SystemParams p;
    p.ctrl.phi = std::atan(2.5);
    p.ctrl.p_star = 0.5;
    p.ctrl.q_star = 0.2;
    p.ctrl.eta = eta_pu * p.omega0();
    return p;
}

SystemParams island_alpha0() {
    SystemParams p;
    p.grid.r_g = 0.0;
    p.grid.l_g = 1.0;
    p.ctrl.phi = std::numbers::pi / 2.0;
    p.ctrl.alpha = 0.0;
    p.ctrl.eta = 0.08 * p.omega0();
    p.ctrl.p_star = 0.0;
    p.ctrl.q_star = 0.0;
    return p;
}

}  // namespace

TEST_CASE("islanded linear design integrates to the closed-form solution") {
    // With no amplitude regulation and zero setpoints the islanded model is
    // exactly linear: dz/dt = (j w0 + eta kappa) z in complex notation.
    const SystemParams p = island_alpha0();
    const Kappa k = kappa(p);
    const std::complex<double> lambda(p.ctrl.eta * k.kr,
                                      p.omega0() + p.ctrl.eta * k.ki);
    const std::complex<double> z0(1.1, -0.3);

    IntegratorConfig cfg;
    cfg.method = IntegratorConfig::Method::rk45;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-12;
    cfg.t_end = 0.2;
    cfg.output_dt = 0.02;
    const Trajectory traj =
        integrate(p, ModelOrder::second, {z0.real(), z0.imag()}, cfg, {}, true);

    REQUIRE(!traj.diverged);
    REQUIRE(traj.samples() == 11);
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        const std::complex<double> want = z0 * std::exp(lambda * traj.t[i]);
        const std::complex<double> got(traj.sample(i)[0], traj.sample(i)[1]);
        CHECK(std::abs(got - want) < 1e-6);           // absolute position error
        CHECK(std::abs(std::abs(got) - std::abs(want)) < 1e-8);  // magnitude error
    }
}

TEST_CASE("fixed-step method has fourth-order convergence") {
    const SystemParams p = island_alpha0();
    const Kappa k = kappa(p);
    const std::complex<double> lambda(p.ctrl.eta * k.kr,
                                      p.omega0() + p.ctrl.eta * k.ki);
    const std::complex<double> z0(1.0, 0.0);

    const auto final_error = [&](double h) {
        IntegratorConfig cfg;
        cfg.method = IntegratorConfig::Method::rk4;
        cfg.fixed_step = h;
        cfg.t_end = 0.1;
        cfg.output_dt = 0.1;
        const Trajectory traj =
            integrate(p, ModelOrder::second, {z0.real(), z0.imag()}, cfg, {}, true);
        const std::complex<double> want = z0 * std::exp(lambda * 0.1);
        const std::complex<double> got(traj.sample(traj.samples() - 1)[0],
                                       traj.sample(traj.samples() - 1)[1]);
        return std::abs(got - want);
    };

    const double e1 = final_error(1e-4);
    const double e2 = final_error(5e-5);
    // halving the step divides the global error by ~16
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("equilibria are fixed points of the integrated flow") {
    const SystemParams p = strong_grid(0.02);
    const EquilibriumSet set = equilibria(p);
    const auto op = select_operating_point(p, set);
    REQUIRE(op.has_value());
    const std::vector<double> x0 = embed_equilibrium(p, *op, ModelOrder::full);

    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.output_dt = 0.1;
    const Trajectory traj = integrate(p, ModelOrder::full, x0, cfg);
    REQUIRE(!traj.diverged);
    const double* xf = traj.sample(traj.samples() - 1);
    double drift = 0.0;
    for (int c = 0; c < 12; ++c) drift = std::max(drift, std::abs(xf[c] - x0[c]));
    CHECK(drift < 1e-8);
}

TEST_CASE("events split the run into segments with updated parameters") {
    const SystemParams p = strong_grid(0.02);
    const EquilibriumSet set = equilibria(p);
    const auto op = select_operating_point(p, set);
    REQUIRE(op.has_value());
    const std::vector<double> x0 = embed_equilibrium(p, *op, ModelOrder::fourth);

    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.output_dt = 0.01;
    const std::vector<Event> schedule = {{0.3, "v_g", 0.5}, {0.6, "v_g", 1.0}};
    const Trajectory traj = integrate(p, ModelOrder::fourth, x0, cfg, schedule);

    REQUIRE(!traj.diverged);
    REQUIRE(traj.segments.size() == 3);
    CHECK(traj.segments[0].t_start == 0.0);
    CHECK(traj.segments[1].t_start == 0.3);
    CHECK(traj.segments[2].t_start == 0.6);
    CHECK(traj.params_at(0.1).grid.v_g == 1.0);
    CHECK(traj.params_at(0.45).grid.v_g == 0.5);
    CHECK(traj.params_at(0.9).grid.v_g == 1.0);
    REQUIRE(traj.events.size() == 2);
    CHECK(traj.events[0].t == 0.3);
    CHECK(traj.events[1].t == 0.6);

    // the state is continuous across the event: the sample spacing bounds
    // the jump between adjacent samples around t = 0.3
    const std::size_t k = 30;  // sample at t = 0.3
    REQUIRE(traj.t[k] == doctest::Approx(0.3));
    double jump = 0.0;
    for (int c = 0; c < 4; ++c)
        jump = std::max(jump, std::abs(traj.sample(k)[c] - traj.sample(k - 1)[c]));
    CHECK(jump < 0.2);

    // the dip does perturb the trajectory (the events were really applied)
    double moved = 0.0;
    for (int c = 0; c < 4; ++c)
        moved = std::max(moved, std::abs(traj.sample(45)[c] - x0[c]));
    CHECK(moved > 1e-3);
}

TEST_CASE("adaptive and fixed-step integrations agree") {
    const SystemParams p = strong_grid(0.02);
    const EquilibriumSet set = equilibria(p);
    const auto op = select_operating_point(p, set);
    REQUIRE(op.has_value());
    std::vector<double> x0 = embed_equilibrium(p, *op, ModelOrder::second);
    x0[0] += 0.2;
    x0[1] -= 0.1;

    IntegratorConfig a;
    a.method = IntegratorConfig::Method::rk45;
    a.rtol = 1e-10;
    a.atol = 1e-12;
    a.t_end = 2.0;
    a.output_dt = 0.05;
    IntegratorConfig b = a;
    b.method = IntegratorConfig::Method::rk4;
    b.fixed_step = 1e-5;

    const Trajectory ta = integrate(p, ModelOrder::second, x0, a);
    const Trajectory tb = integrate(p, ModelOrder::second, x0, b);
    REQUIRE(ta.samples() == tb.samples());
    double diff = 0.0;
    for (std::size_t i = 0; i < ta.samples(); ++i) {
        diff = std::max(diff, std::abs(ta.sample(i)[0] - tb.sample(i)[0]));
        diff = std::max(diff, std::abs(ta.sample(i)[1] - tb.sample(i)[1]));
    }
    CHECK(diff < 1e-5);
}

TEST_CASE("repeated runs are bitwise deterministic") {
    const SystemParams p = strong_grid(0.06);
    IntegratorConfig cfg;
    cfg.t_end = 0.5;
    cfg.output_dt = 0.01;
    const std::vector<double> x0 = {1.0, 0.0};
    const Trajectory t1 = integrate(p, ModelOrder::second, x0, cfg);
    const Trajectory t2 = integrate(p, ModelOrder::second, x0, cfg);
    REQUIRE(t1.x.size() == t2.x.size());
    CHECK(std::memcmp(t1.x.data(), t2.x.data(), t1.x.size() * sizeof(double)) == 0);
}

TEST_CASE("blow-up is flagged, not fatal") {
    // a huge fixed step makes the stiff filter dynamics explode
    const SystemParams p = strong_grid(0.02);
    const EquilibriumSet set = equilibria(p);
    const auto op = select_operating_point(p, set);
    REQUIRE(op.has_value());
    std::vector<double> x0 = embed_equilibrium(p, *op, ModelOrder::full);
    x0[0] += 0.1;

    IntegratorConfig cfg;
    cfg.method = IntegratorConfig::Method::rk4;
    cfg.fixed_step = 1.0;
    cfg.t_end = 5.0;
    cfg.output_dt = 1.0;
    const Trajectory traj = integrate(p, ModelOrder::full, x0, cfg);
    CHECK(traj.diverged);
    CHECK(traj.diverged_at >= 0.0);
    CHECK(traj.diverged_at <= 5.0);
}

TEST_CASE("step budget stops the run and is reported") {
    const SystemParams p = strong_grid(0.02);
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.output_dt = 0.1;
    cfg.max_steps = 10;
    const Trajectory traj = integrate(p, ModelOrder::second, {1.0, 0.0}, cfg);
    CHECK(traj.stats.step_limit_hit);
    CHECK(traj.stats.steps + traj.stats.rejected <= 10);
}

TEST_CASE("output grid is uniform and spans the full horizon") {
    const SystemParams p = strong_grid(0.02);
    IntegratorConfig cfg;
    cfg.t_end = 0.37;
    cfg.output_dt = 0.05;
    const Trajectory traj = integrate(p, ModelOrder::second, {1.0, 0.0}, cfg);
    REQUIRE(traj.samples() >= 2);
    CHECK(traj.t.front() == 0.0);
    CHECK(traj.t.back() == doctest::Approx(0.37).epsilon(1e-12));
    for (std::size_t i = 1; i + 1 < traj.samples(); ++i) {
        CHECK(traj.t[i] - traj.t[i - 1] == doctest::Approx(0.05).epsilon(1e-9));
    }
    CHECK(traj.stats.rhs_evals > 0);
    CHECK(traj.stats.steps > 0);
}
