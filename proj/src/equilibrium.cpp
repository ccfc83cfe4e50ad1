#include "cdroop/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cdroop/certify.hpp"

namespace cdroop {

namespace {

constexpr double kConsistencyTol = 1e-9;

double wrap_to_pi(double angle) {
    double t = std::remainder(angle, 2.0 * std::numbers::pi);
    if (t <= -std::numbers::pi) t = std::numbers::pi;
    return t;
}

}  // namespace

CubicCoefficients cubic_coefficients(const SystemParams& params) {
    const Kappa k = kappa(params);
    const double alpha = params.ctrl.alpha;
    const double vstar2 = params.ctrl.v_star * params.ctrl.v_star;
    const double freq_offset = params.omega_delta() / params.ctrl.eta;
    const double y_abs = std::abs(params.y());
    const double kr_a = k.kr + alpha;
    const double ki_w = k.ki + freq_offset;
    CubicCoefficients c;
    c.a = alpha * alpha / (vstar2 * vstar2);
    c.b = -2.0 * alpha * kr_a / vstar2;
    c.c = kr_a * kr_a + ki_w * ki_w;
    c.d = -params.grid.v_g * params.grid.v_g * y_abs * y_abs;
    return c;
}

std::optional<EquilibriumPoint> recover_angle(const SystemParams& params, double x,
                                              std::vector<std::string>* diagnostics) {
    auto reject = [&](const std::string& why) -> std::optional<EquilibriumPoint> {
        if (diagnostics) diagnostics->push_back(why);
        return std::nullopt;
    };
    if (!(x > 0.0)) return reject("nonpositive squared magnitude");
    if (!(params.grid.v_g > 0.0))
        return reject("steady-state angle undefined without a grid source");

    const Kappa k = kappa(params);
    const double alpha = params.ctrl.alpha;
    const double vstar2 = params.ctrl.v_star * params.ctrl.v_star;
    const double freq_offset = params.omega_delta() / params.ctrl.eta;
    const double y_abs = std::abs(params.y());
    const double v_s = std::sqrt(x);
    const double scale = v_s / (params.grid.v_g * y_abs);

    const double cos_part = (-(k.kr + alpha) + alpha * x / vstar2) * scale;
    const double sin_part = (k.ki + freq_offset) * scale;
    const double radius = std::hypot(cos_part, sin_part);
    const double consistency = std::abs(radius - 1.0);
    if (consistency > kConsistencyTol)
        return reject("inconsistent root: recovered angle off the unit circle by " +
                      std::to_string(consistency));

    EquilibriumPoint p;
    p.x = x;
    p.v_s = v_s;
    p.delta_s = wrap_to_pi(std::atan2(sin_part, cos_part) - params.phi_tilde());
    p.v_rect = Vec2{v_s * std::cos(p.delta_s), v_s * std::sin(p.delta_s)};
    p.consistency = consistency;
    // Both steady-state equations, evaluated with the wrapped angle.
    const double ang = p.delta_s + params.phi_tilde();
    const double pull = params.grid.v_g * y_abs / v_s;
    p.residual_amp = (k.kr + alpha - alpha * x / vstar2) + pull * std::cos(ang);
    p.residual_ang = (k.ki + freq_offset) - pull * std::sin(ang);
    return p;
}

EquilibriumSet equilibria(const SystemParams& params) {
    params.validate();
    EquilibriumSet set;
    set.cubic = cubic_coefficients(params);
    set.degenerate = (params.ctrl.alpha == 0.0);
    if (set.degenerate) {
        set.discriminant = std::numeric_limits<double>::quiet_NaN();
        set.diagnostics.push_back("alpha = 0: steady-state polynomial is linear in x");
    } else {
        set.discriminant = cubic_discriminant(set.cubic);
    }

    for (double x : solve_positive_roots(set.cubic)) {
        if (auto p = recover_angle(params, x, &set.diagnostics)) set.points.push_back(*p);
    }
    std::sort(set.points.begin(), set.points.end(),
              [](const EquilibriumPoint& a, const EquilibriumPoint& b) { return a.v_s < b.v_s; });
    if (set.degenerate) {
        set.unique = set.points.size() == 1;
    } else {
        // The discriminant is homogeneous of degree four in the coefficients,
        // so the near-zero band scales with the fourth power of their size.
        const double scale =
            std::max({std::abs(set.cubic.a), std::abs(set.cubic.b),
                      std::abs(set.cubic.c), std::abs(set.cubic.d)});
        set.marginal = std::abs(set.discriminant) < 1e-12 * std::pow(scale, 4);
        set.unique = !set.marginal && set.discriminant < 0.0;
        if (set.marginal)
            set.diagnostics.push_back(
                "marginal uniqueness: discriminant within rounding of zero");
    }
    return set;
}

EquilibriumSet classical_droop_equilibria(const SystemParams& params) {
    params.validate();
    EquilibriumSet set;
    set.discriminant = std::numeric_limits<double>::quiet_NaN();
    set.diagnostics.push_back("classical droop: quartic steady-state polynomial in v_s");

    const double alpha = params.ctrl.alpha;
    const double y_abs = std::abs(params.y());
    const double big_c = y_abs * std::cos(params.phi_tilde());
    const double big_s = y_abs * std::sin(params.phi_tilde());
    const RotatedPower sp = rotated_setpoints(params);
    const double a0 = sp.q_phi + alpha * params.ctrl.v_star;
    const double b0 = sp.p_phi + params.omega_delta() / params.ctrl.eta;
    const double vg2y2 = params.grid.v_g * params.grid.v_g * y_abs * y_abs;

    const std::vector<double> quartic = {
        y_abs * y_abs,
        2.0 * alpha * big_c,
        alpha * alpha - 2.0 * a0 * big_c + 2.0 * b0 * big_s - vg2y2,
        -2.0 * alpha * a0,
        a0 * a0 + b0 * b0,
    };

    for (double v_s : real_roots(quartic)) {
        if (!(v_s > 0.0)) continue;
        if (!(params.grid.v_g > 0.0)) {
            set.diagnostics.push_back("steady-state angle undefined without a grid source");
            continue;
        }
        const double denom = v_s * params.grid.v_g * y_abs;
        const double cos_part = (v_s * v_s * big_c - a0 + alpha * v_s) / denom;
        const double sin_part = (b0 + v_s * v_s * big_s) / denom;
        const double consistency = std::abs(std::hypot(cos_part, sin_part) - 1.0);
        if (consistency > kConsistencyTol) {
            set.diagnostics.push_back("inconsistent quartic root dropped, v_s = " +
                                      std::to_string(v_s));
            continue;
        }
        EquilibriumPoint p;
        p.x = v_s * v_s;
        p.v_s = v_s;
        p.delta_s = wrap_to_pi(std::atan2(sin_part, cos_part) - params.phi_tilde());
        p.v_rect = Vec2{v_s * std::cos(p.delta_s), v_s * std::sin(p.delta_s)};
        p.consistency = consistency;
        const double ang = p.delta_s + params.phi_tilde();
        p.residual_amp = (sp.q_phi + alpha * (params.ctrl.v_star - v_s)) -
                         (v_s * v_s * big_c - denom * std::cos(ang));
        p.residual_ang = b0 - (-v_s * v_s * big_s + denom * std::sin(ang));
        set.points.push_back(p);
    }
    std::sort(set.points.begin(), set.points.end(),
              [](const EquilibriumPoint& a, const EquilibriumPoint& b) { return a.v_s < b.v_s; });
    set.unique = (set.points.size() == 1);
    return set;
}

State12 full_order_equilibrium(const SystemParams& params, const EquilibriumPoint& p) {
    const Vec2 v_s = p.v_rect;
    const Vec2 i_s = params.y_mat() * (v_s - params.v_g_vec());
    const Vec2 i_f_s = params.y_f_mat() * v_s + i_s;
    State12 x{};
    x[kVhat] = v_s.d;
    x[kVhat + 1] = v_s.q;
    x[kCurrent] = i_s.d;
    x[kCurrent + 1] = i_s.q;
    x[kCapVoltage] = v_s.d;
    x[kCapVoltage + 1] = v_s.q;
    x[kZetaV] = 0.0;
    x[kZetaV + 1] = 0.0;
    x[kFilterCurrent] = i_f_s.d;
    x[kFilterCurrent + 1] = i_f_s.q;
    x[kZetaC] = 0.0;
    x[kZetaC + 1] = 0.0;
    return x;
}

std::vector<double> embed_equilibrium(const SystemParams& params,
                                      const EquilibriumPoint& p, ModelOrder order) {
    const State12 full = full_order_equilibrium(params, p);
    return std::vector<double>(full.begin(), full.begin() + dimension(order));
}

}  // namespace cdroop
