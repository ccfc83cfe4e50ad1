#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "cdroop/dynamics.hpp"
#include "cdroop/equilibrium.hpp"
#include "cdroop/params.hpp"

namespace cdroop {

// Gap between the rotated power setpoint density and the network admittance,
//   kr + j ki = e^{j phi} (sigma_star - y).
// Every closed-form stability statement below reduces to an inequality on
// this pair, the droop gain alpha and the frequency offset.
struct Kappa {
    double kr = 0.0;
    double ki = 0.0;
};
Kappa kappa(const SystemParams& params);

// Active/reactive setpoints rotated by e^{j(pi/2 - phi)}; at phi = pi/2 the
// pair is (p_star, q_star) unchanged.
RotatedPower rotated_setpoints(const SystemParams& params);

// Short-circuit ratio seen through a power rotation of angle theta,
// Re{e^{j theta} y}. At theta = arg(z) this equals |y|.
double scr_theta(const SystemParams& params, double theta);

// Outcome of one analytic test. `margin` is positive exactly when the test
// passes, measured in the natural units of the underlying inequality.
// `paper_eq` is the short cross-reference key used in machine-readable
// reports; empty when the test has no such key.
struct CertificateResult {
    std::string name;
    bool satisfied = false;
    double margin = 0.0;
    std::string detail;
    std::string paper_eq;
};

// Almost global synchronization of the amplitude/phase oscillator with the
// equilibrium magnitude known. Requires alpha > 0.
CertificateResult check_global(const SystemParams& params, const EquilibriumPoint& point);

// Same conclusion from parameters alone (no equilibrium knowledge); strictly
// more conservative than check_global.
CertificateResult check_global_parameter_only(const SystemParams& params);

// Sufficient condition for local exponential stability of one equilibrium.
CertificateResult check_local_sufficient(const SystemParams& params,
                                         const EquilibriumPoint& point);

// Exact linearization verdict: both Jacobian eigenvalues strictly in the
// open left half plane. Margin is the spectral abscissa with reversed sign,
// in rad/s.
CertificateResult check_local_eigenvalues(const SystemParams& params,
                                          const EquilibriumPoint& point);

// Sufficient condition for instability of one equilibrium (positive trace,
// or negative determinant of the linearization, in closed form).
CertificateResult check_unstable(const SystemParams& params, const EquilibriumPoint& point);

// Voltage-following design (alpha = 0): almost global synchronization holds
// exactly when kr < 0.
CertificateResult check_voltage_following(const SystemParams& params);

// Uniform bound on the oscillator voltage magnitude: ||v(t)|| never exceeds
// max{||v(0)||, voltage_bound}. Requires alpha > 0; returns +inf otherwise.
// When the amplitude term alone would bound below the grid magnitude, the
// grid magnitude is the binding term.
double voltage_bound(const SystemParams& params);

// Behaviour of the islanded oscillator feeding the (r_g, l_g) branch as a
// passive load: decay of the voltage to zero (exponential, or merely
// algebraic in the marginal case), or attraction to a circular limit cycle
// with the stated radius and rotation rate.
struct OffGridPrediction {
    bool converges_to_origin = false;
    bool algebraic_decay = false;
    bool has_limit_cycle = false;
    double cycle_radius = 0.0;  // pu
    double cycle_rate = 0.0;    // rad/s, stationary frame
    double cycle_period = 0.0;  // s
    CertificateResult certificate;
};
OffGridPrediction off_grid_prediction(const SystemParams& params);

// Jacobian of the amplitude/phase oscillator vector field at an arbitrary
// voltage v (not only at equilibria). stationary_frame selects the islanded
// model's frame rate.
Mat2 oscillator_jacobian(const SystemParams& params, const Vec2& v,
                         bool stationary_frame = false);

// (x - y)' (||x||^2 x - ||y||^2 y) - 0.5 ||y||^2 ||x - y||^2, nonnegative
// for all pairs; the incremental form behind the global certificates.
double amplitude_cubic_gap(const Vec2& x, const Vec2& y);

// Preferred steady state for starting time-domain studies: the
// eigenvalue-stable point of largest magnitude, falling back to the largest
// magnitude overall when none is stable. Empty set gives nullopt.
std::optional<EquilibriumPoint> select_operating_point(const SystemParams& params,
                                                       const EquilibriumSet& set);

}  // namespace cdroop
