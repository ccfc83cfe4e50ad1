#include "cdroop/certify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace cdroop {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Shared pieces of the linearization tests at an equilibrium with squared
// magnitude x: trace gap and determinant decomposition.
struct LinearizationTerms {
    double c = 0.0;        // kr + alpha
    double ratio = 0.0;    // alpha * x / vstar^2
    double g = 0.0;        // c - 2 * ratio (half-trace over eta)
    double h = 0.0;        // ratio (amplitude coupling)
    double w = 0.0;        // omega_delta / eta + ki
};

LinearizationTerms linearization_terms(const SystemParams& params, double x) {
    const Kappa k = kappa(params);
    const double vstar2 = params.ctrl.v_star * params.ctrl.v_star;
    LinearizationTerms t;
    t.c = k.kr + params.ctrl.alpha;
    t.ratio = params.ctrl.alpha * x / vstar2;
    t.g = t.c - 2.0 * t.ratio;
    t.h = t.ratio;
    t.w = params.omega_delta() / params.ctrl.eta + k.ki;
    return t;
}

}  // namespace

Kappa kappa(const SystemParams& params) {
    const std::complex<double> rot = std::polar(1.0, params.ctrl.phi);
    const std::complex<double> gap = rot * (params.sigma_star() - params.y());
    return Kappa{gap.real(), gap.imag()};
}

RotatedPower rotated_setpoints(const SystemParams& params) {
    return rotated_power(params.ctrl.p_star, params.ctrl.q_star, params.ctrl.phi);
}

double scr_theta(const SystemParams& params, double theta) {
    return (std::polar(1.0, theta) * params.y()).real();
}

CertificateResult check_global(const SystemParams& params, const EquilibriumPoint& point) {
    const Kappa k = kappa(params);
    const double vstar2 = params.ctrl.v_star * params.ctrl.v_star;
    const double rhs = 0.5 * params.ctrl.alpha * point.x / vstar2;
    CertificateResult r;
    r.name = "global_sync";
    r.paper_eq = "19";
    r.margin = rhs - (k.kr + params.ctrl.alpha);
    r.satisfied = r.margin > 0.0;
    r.detail = "kr + alpha = " + fmt(k.kr + params.ctrl.alpha) +
               " vs alpha*||v_s||^2/(2 vstar^2) = " + fmt(rhs);
    return r;
}

CertificateResult check_global_parameter_only(const SystemParams& params) {
    const Kappa k = kappa(params);
    CertificateResult r;
    r.name = "global_sync_parameter_only";
    r.paper_eq = "20";
    r.margin = -(k.kr + params.ctrl.alpha);
    r.satisfied = r.margin > 0.0;
    r.detail = "kr + alpha = " + fmt(k.kr + params.ctrl.alpha) + " (needs < 0)";
    return r;
}

CertificateResult check_local_sufficient(const SystemParams& params,
                                         const EquilibriumPoint& point) {
    const Kappa k = kappa(params);
    const double vstar2 = params.ctrl.v_star * params.ctrl.v_star;
    const double rhs = params.ctrl.alpha * point.x / vstar2;
    CertificateResult r;
    r.name = "local_sync";
    r.paper_eq = "p5";
    r.margin = rhs - (k.kr + params.ctrl.alpha);
    r.satisfied = r.margin > 0.0;
    r.detail = "kr + alpha = " + fmt(k.kr + params.ctrl.alpha) +
               " vs alpha*||v_s||^2/vstar^2 = " + fmt(rhs);
    return r;
}

CertificateResult check_local_eigenvalues(const SystemParams& params,
                                          const EquilibriumPoint& point) {
    const Mat2 a = oscillator_jacobian(params, point.v_rect);
    std::complex<double> l1, l2;
    eigenvalues_2x2(a, l1, l2);
    const double abscissa = std::max(l1.real(), l2.real());
    CertificateResult r;
    r.name = "linearization_hurwitz";
    r.margin = -abscissa;
    r.satisfied = abscissa < 0.0;
    r.detail = "eigenvalues " + fmt(l1.real()) + (l1.imag() >= 0 ? "+" : "-") +
               fmt(std::abs(l1.imag())) + "j, " + fmt(l2.real()) +
               (l2.imag() >= 0 ? "+" : "-") + fmt(std::abs(l2.imag())) + "j rad/s";
    return r;
}

CertificateResult check_unstable(const SystemParams& params, const EquilibriumPoint& point) {
    const LinearizationTerms t = linearization_terms(params, point.x);
    const double margin_trace = t.c - 2.0 * t.ratio;             // positive trace
    const double margin_det = t.h * t.h - t.g * t.g - t.w * t.w; // negative determinant
    CertificateResult r;
    r.name = "instability";
    r.paper_eq = "p6";
    r.margin = std::max(margin_trace, margin_det);
    r.satisfied = r.margin > 0.0;
    if (std::abs(r.margin) < 1e-10) {
        // Strict inequalities carry no tolerance; a margin this small decides
        // nothing either way.
        r.satisfied = false;
        r.detail = "inconclusive: margin " + fmt(r.margin) + " within rounding of zero";
    } else if (margin_trace > 0.0) {
        r.detail = "positive trace: kr + alpha = " + fmt(t.c) + " > " + fmt(2.0 * t.ratio);
    } else if (margin_det > 0.0) {
        r.detail = "negative determinant: G^2 + W^2 = " + fmt(t.g * t.g + t.w * t.w) +
                   " < H^2 = " + fmt(t.h * t.h);
    } else {
        r.detail = "no instability witness (trace gap " + fmt(margin_trace) +
                   ", determinant gap " + fmt(margin_det) + ")";
    }
    return r;
}

CertificateResult check_voltage_following(const SystemParams& params) {
    const Kappa k = kappa(params);
    CertificateResult r;
    r.name = "voltage_following_sync";
    r.paper_eq = "p1";
    r.margin = -k.kr;
    r.satisfied = r.margin > 0.0;
    r.detail = "kr = " + fmt(k.kr) + " (needs < 0)";
    if (params.ctrl.alpha != 0.0)
        r.detail += "; note: stated for designs without amplitude regulation (alpha = 0)";
    return r;
}

double voltage_bound(const SystemParams& params) {
    if (!(params.ctrl.alpha > 0.0)) return std::numeric_limits<double>::infinity();
    const Kappa k = kappa(params);
    const double radicand = 1.0 + (k.kr + std::abs(params.y())) / params.ctrl.alpha;
    const double amplitude_term =
        radicand > 0.0 ? params.ctrl.v_star * std::sqrt(radicand) : 0.0;
    return std::max(params.grid.v_g, amplitude_term);
}

OffGridPrediction off_grid_prediction(const SystemParams& params) {
    constexpr double kBoundaryTol = 1e-12;
    const Kappa k = kappa(params);
    const double c = k.kr + params.ctrl.alpha;

    OffGridPrediction pred;
    pred.certificate.name = "off_grid_origin_attractive";
    pred.certificate.paper_eq = "p2";
    pred.certificate.margin = -c;
    pred.certificate.satisfied = c <= 0.0;

    if (c > kBoundaryTol) {
        if (!(params.ctrl.alpha > 0.0)) {
            // No amplitude regulation and net local instability: magnitudes grow
            // without bound, there is no cycle to report.
            pred.certificate.detail = "kr = " + fmt(k.kr) + " > 0 with alpha = 0: unbounded";
            return pred;
        }
        pred.has_limit_cycle = true;
        pred.cycle_radius = params.ctrl.v_star * std::sqrt(c / params.ctrl.alpha);
        pred.cycle_rate = params.omega0() + params.ctrl.eta * k.ki;
        pred.cycle_period =
            pred.cycle_rate != 0.0 ? 2.0 * std::numbers::pi / std::abs(pred.cycle_rate) : 0.0;
        pred.certificate.detail = "limit cycle, radius " + fmt(pred.cycle_radius) +
                                  " pu, period " + fmt(pred.cycle_period) + " s";
        return pred;
    }

    pred.converges_to_origin = true;
    pred.algebraic_decay = std::abs(c) <= kBoundaryTol;
    pred.certificate.detail = pred.algebraic_decay
                                  ? "origin attractive, algebraic (non-exponential) decay"
                                  : "origin exponentially stable, rate eta*" + fmt(-c);
    return pred;
}

Mat2 oscillator_jacobian(const SystemParams& params, const Vec2& v, bool stationary_frame) {
    const double frame_rate = stationary_frame ? params.omega0() : params.omega_delta();
    const double eta = params.ctrl.eta;
    const double alpha = params.ctrl.alpha;
    const double vstar2 = params.ctrl.v_star * params.ctrl.v_star;
    const double phi_coeff = (vstar2 - v.norm2()) / vstar2;

    Mat2 a = Mat2::j() * frame_rate;
    a = a + (params.s_phi_star_mat() - params.y_phi_mat()) * eta;
    a = a + Mat2::identity() * (eta * alpha * phi_coeff);
    const double s = 2.0 * eta * alpha / vstar2;
    a.a11 -= s * v.d * v.d;
    a.a12 -= s * v.d * v.q;
    a.a21 -= s * v.q * v.d;
    a.a22 -= s * v.q * v.q;
    return a;
}

double amplitude_cubic_gap(const Vec2& x, const Vec2& y) {
    const Vec2 diff = x - y;
    const Vec2 cubic = x * x.norm2() - y * y.norm2();
    return dot(diff, cubic) - 0.5 * y.norm2() * diff.norm2();
}

std::optional<EquilibriumPoint> select_operating_point(const SystemParams& params,
                                                       const EquilibriumSet& set) {
    std::optional<EquilibriumPoint> pick;
    bool pick_stable = false;
    for (const auto& p : set.points) {  // points ascend in magnitude
        const bool stable = check_local_eigenvalues(params, p).satisfied;
        if (!pick || stable > pick_stable || (stable == pick_stable && p.v_s > pick->v_s)) {
            pick = p;
            pick_stable = stable;
        }
    }
    return pick;
}

}  // namespace cdroop
