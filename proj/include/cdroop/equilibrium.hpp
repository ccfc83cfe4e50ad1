#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdroop/cubic.hpp"
#include "cdroop/params.hpp"
#include "cdroop/state.hpp"

namespace cdroop {

// One synchronous steady state of the grid-connected converter.
struct EquilibriumPoint {
    double x = 0.0;        // squared voltage magnitude, pu^2
    double v_s = 0.0;      // voltage magnitude, pu
    double delta_s = 0.0;  // angle relative to the grid voltage, rad, in (-pi, pi]
    Vec2 v_rect;           // rectangular coordinates in the grid frame
    double residual_amp = 0.0;  // amplitude-channel steady-state equation residual
    double residual_ang = 0.0;  // angle-channel steady-state equation residual
    double consistency = 0.0;   // |hypot(cos, sin) - 1| of the recovered angle
};

struct EquilibriumSet {
    std::vector<EquilibriumPoint> points;  // ascending voltage magnitude
    CubicCoefficients cubic;
    double discriminant = 0.0;  // NaN when the cubic degenerates (alpha = 0)
    bool unique = false;        // discriminant < 0 (exactly one steady state)
    // Discriminant within 1e-12 of zero at the coefficient scale: uniqueness
    // is numerically undecidable, so unique is forced false (conservative).
    bool marginal = false;
    bool degenerate = false;    // alpha = 0: the cubic collapses to degree <= 1
    std::vector<std::string> diagnostics;
};

// Coefficients of the steady-state cubic in x = v_s^2.
CubicCoefficients cubic_coefficients(const SystemParams& params);

// Recovers the steady-state angle for a given squared magnitude x > 0.
// Returns nullopt (with a diagnostic appended when a sink is given) if the
// trigonometric consistency check fails or the geometry is undefined.
std::optional<EquilibriumPoint> recover_angle(const SystemParams& params, double x,
                                              std::vector<std::string>* diagnostics = nullptr);

// All synchronous steady states of the droop-controlled converter.
EquilibriumSet equilibria(const SystemParams& params);

// Steady states under classical (decoupled) droop control with the same
// setpoints; the defining polynomial is a quartic in v_s and may have no
// real roots at all (loss of existence under large disturbances).
EquilibriumSet classical_droop_equilibria(const SystemParams& params);

// Embeds a steady state of the oscillator into the cascaded model:
// (vhat, i, v, zeta_v, i_f, zeta_c) =
// (v_s, Y (v_s - v_g), v_s, 0, Y_f v_s + Y (v_s - v_g), 0).
State12 full_order_equilibrium(const SystemParams& params, const EquilibriumPoint& p);

// Prefix of the embedding matching the requested model order.
std::vector<double> embed_equilibrium(const SystemParams& params,
                                      const EquilibriumPoint& p, ModelOrder order);

}  // namespace cdroop
