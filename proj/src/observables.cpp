#include "cdroop/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "cdroop/certify.hpp"

namespace cdroop {

void measurement_pair(const CompiledModel& model, const double* x, Vec2& v_meas,
                      Vec2& i_meas) {
    const SystemParams& params = model.params();
    const Vec2 vhat{x[kVhat], x[kVhat + 1]};
    switch (model.order()) {
        case ModelOrder::second:
            v_meas = vhat;
            i_meas = params.y_mat() *
                     (model.stationary_frame() ? vhat : vhat - params.v_g_vec());
            break;
        case ModelOrder::fourth:
            v_meas = vhat;
            i_meas = Vec2{x[kCurrent], x[kCurrent + 1]};
            break;
        case ModelOrder::eighth:
        case ModelOrder::full:
            v_meas = Vec2{x[kCapVoltage], x[kCapVoltage + 1]};
            i_meas = Vec2{x[kCurrent], x[kCurrent + 1]};
            break;
    }
}

DerivedSignals derived_signals(const CompiledModel& model, const double* x) {
    DerivedSignals out;
    Vec2 v_meas, i_meas;
    measurement_pair(model, x, v_meas, i_meas);
    out.v = v_meas.norm();
    out.p = dot(v_meas, i_meas);
    // q = Im{v conj(i)}, positive for lagging current, matching the
    // convention the droop law regulates toward q_star
    out.q = cross(i_meas, v_meas);

    // Complex frequency of the oscillator voltage: (dvhat/dt) / vhat.
    std::vector<double> dxdt(model.dim());
    model.rhs(x, dxdt.data());
    const Vec2 vhat{x[kVhat], x[kVhat + 1]};
    const Vec2 dvhat{dxdt[kVhat], dxdt[kVhat + 1]};
    const double n2 = vhat.norm2();
    if (n2 > 1e-24) {
        out.eps = dot(vhat, dvhat) / n2;
        out.omega = model.frame_rate() + cross(vhat, dvhat) / n2;
    } else {
        out.eps = std::numeric_limits<double>::quiet_NaN();
        out.omega = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

PolarSignals polar_signals(const CompiledModel& model, const double* x) {
    const DerivedSignals d = derived_signals(model, x);
    PolarSignals out;
    out.v = std::hypot(x[kVhat], x[kVhat + 1]);
    out.delta = std::atan2(x[kVhat + 1], x[kVhat]);
    out.eps = d.eps;
    out.omega = d.omega;
    return out;
}

ErrorNorms error_norms(const SystemParams& params, const EquilibriumPoint& point,
                       const double x[12]) {
    const Vec2 vhat{x[kVhat], x[kVhat + 1]};
    const Vec2 i{x[kCurrent], x[kCurrent + 1]};
    const Vec2 v{x[kCapVoltage], x[kCapVoltage + 1]};
    const Vec2 zeta_v{x[kZetaV], x[kZetaV + 1]};
    const Vec2 i_f{x[kFilterCurrent], x[kFilterCurrent + 1]};
    const Vec2 zeta_c{x[kZetaC], x[kZetaC + 1]};

    // The loop errors pair the tracking mismatch with its integrator state,
    // so each norm is the full error of that level, not just its front half.
    ErrorNorms e;
    e.droop = (vhat - point.v_rect).norm();
    e.grid_current = (i - params.y_mat() * (vhat - params.v_g_vec())).norm();
    e.voltage_loop = std::sqrt((v - vhat).norm2() + zeta_v.norm2());
    const Vec2 i_f_err = i_f - voltage_loop_reference(params, vhat, i, v, zeta_v);
    e.current_loop = std::sqrt(i_f_err.norm2() + zeta_c.norm2());
    return e;
}

double droop_energy(const SystemParams& params, const EquilibriumPoint& point,
                    const double* x) {
    const Vec2 vhat{x[kVhat], x[kVhat + 1]};
    return 0.5 * (vhat - point.v_rect).norm2() / params.ctrl.eta;
}

ErrorTrace error_coordinates(const Trajectory& traj) {
    if (traj.order != ModelOrder::full)
        throw std::invalid_argument("error_coordinates: needs the full-order model");
    ErrorTrace out;
    const std::size_t n = traj.samples();
    out.t = traj.t;
    out.droop.resize(n);
    out.grid_current.resize(n);
    out.voltage_loop.resize(n);
    out.current_loop.resize(n);

    // Walk segments in step with samples so the steady-state target follows
    // parameter changes.
    std::size_t seg = 0;
    std::optional<EquilibriumPoint> target;
    bool target_fresh = false;
    for (std::size_t i = 0; i < n; ++i) {
        while (seg + 1 < traj.segments.size() &&
               traj.t[i] >= traj.segments[seg + 1].t_start) {
            ++seg;
            target_fresh = false;
        }
        const SystemParams& params = traj.segments[seg].params;
        if (!target_fresh) {
            target = select_operating_point(params, equilibria(params));
            target_fresh = true;
        }
        const ErrorNorms e =
            target ? error_norms(params, *target, traj.sample(i)) : ErrorNorms{};
        out.droop[i] =
            target ? e.droop : std::numeric_limits<double>::quiet_NaN();
        out.grid_current[i] = e.grid_current;
        out.voltage_loop[i] = e.voltage_loop;
        out.current_loop[i] = e.current_loop;
        if (!target) {
            // The loop errors are target-free; recompute them directly.
            EquilibriumPoint dummy;
            const ErrorNorms f = error_norms(params, dummy, traj.sample(i));
            out.grid_current[i] = f.grid_current;
            out.voltage_loop[i] = f.voltage_loop;
            out.current_loop[i] = f.current_loop;
        }
    }
    return out;
}

double time_to_fraction(const std::vector<double>& t, const std::vector<double>& y,
                        double t_ref, double fraction) {
    double peak = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t_ref && std::isfinite(y[i])) peak = std::max(peak, y[i]);
    if (peak <= 0.0) return 0.0;
    const double level = fraction * peak;
    // Settled means below the level for good, so find the last excursion
    // above it (curves may start below, swell, then decay).
    std::size_t last_above = t.size();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t_ref && y[i] > level) last_above = i;
    if (last_above == t.size()) return 0.0;
    if (last_above + 1 == t.size()) return std::numeric_limits<double>::infinity();
    return t[last_above + 1] - t_ref;
}

LyapunovTrace lyapunov_trace(const Trajectory& traj, const EquilibriumPoint& eq) {
    LyapunovTrace out;
    const std::size_t n = traj.samples();
    out.t = traj.t;
    out.value.resize(n);
    const SystemParams& params = traj.segments.back().params;
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.value[i] = droop_energy(params, eq, traj.sample(i));
        peak = std::max(peak, out.value[i]);
    }
    for (std::size_t i = 1; i < n; ++i)
        out.max_increase = std::max(out.max_increase, out.value[i] - out.value[i - 1]);
    out.monotone = out.max_increase <= 1e-9 * peak;
    return out;
}

}  // namespace cdroop
