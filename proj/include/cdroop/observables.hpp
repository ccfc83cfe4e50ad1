#pragma once

#include <vector>

#include "cdroop/dynamics.hpp"
#include "cdroop/equilibrium.hpp"
#include "cdroop/integrate.hpp"
#include "cdroop/mat2.hpp"
#include "cdroop/state.hpp"

namespace cdroop {

// Voltage/current pair the droop law closes on, by model order: the
// oscillator voltage with the quasi-static branch current (order 2), the
// oscillator voltage with the measured current (order 4), or the filter
// capacitor voltage with the measured current (orders 8, 12).
void measurement_pair(const CompiledModel& model, const double* x, Vec2& v_meas,
                      Vec2& i_meas);

// Instantaneous scalars derived from one sample: the power pair seen by the
// droop law, its voltage magnitude, and the two components (amplitude rate,
// frequency) of the oscillator's complex frequency. omega is absolute
// (frame rate included); eps and omega are NaN where the oscillator voltage
// vanishes.
struct DerivedSignals {
    double p = 0.0;      // active power, pu
    double q = 0.0;      // reactive power, pu
    double v = 0.0;      // measurement voltage magnitude, pu
    double omega = 0.0;  // instantaneous frequency, rad/s
    double eps = 0.0;    // normalized amplitude rate, 1/s
};
DerivedSignals derived_signals(const CompiledModel& model, const double* x);

// Polar view of the oscillator voltage in one sample.
PolarSignals polar_signals(const CompiledModel& model, const double* x);

// Norms of the nested error coordinates of the cascaded model relative to
// one equilibrium, slowest to fastest level.
struct ErrorNorms {
    double droop = 0.0;         // ||vhat - v_s||
    double grid_current = 0.0;  // ||i - Y (vhat - v_g)||
    double voltage_loop = 0.0;  // ||[v - vhat, zeta_v]||
    double current_loop = 0.0;  // ||[i_f - i_f_ref, zeta_c]||
};
ErrorNorms error_norms(const SystemParams& params, const EquilibriumPoint& point,
                       const double x[12]);

// Distance-to-equilibrium energy of the oscillator voltage, the quantity
// the global certificates make decay: ||vhat - v_s||^2 / (2 eta).
double droop_energy(const SystemParams& params, const EquilibriumPoint& point,
                    const double* x);

// Per-sample nested error norms along a full-order trajectory. The droop
// error is measured against the selected steady state of whichever parameter
// segment each sample falls in (NaN where a segment has none).
struct ErrorTrace {
    std::vector<double> t;
    std::vector<double> droop, grid_current, voltage_loop, current_loop;
};
ErrorTrace error_coordinates(const Trajectory& traj);

// Time from t_ref until the curve has fallen below the given fraction of
// its maximum over [t_ref, end) for good (the sample after its last
// excursion above that level). +inf when it is still above at the end,
// 0 when it never exceeds the level or the window holds no signal.
double time_to_fraction(const std::vector<double>& t, const std::vector<double>& y,
                        double t_ref, double fraction);

// Droop energy sampled along a second-order trajectory against one fixed
// steady state; flags any increase above 1e-9 of the peak value.
struct LyapunovTrace {
    std::vector<double> t, value;
    double max_increase = 0.0;
    bool monotone = true;
};
LyapunovTrace lyapunov_trace(const Trajectory& traj, const EquilibriumPoint& eq);

}  // namespace cdroop
