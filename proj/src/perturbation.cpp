#include "cdroop/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace cdroop {

namespace {

constexpr double kEpsilonInfimum = 3.0;  // degenerate region scale (zero radius)
constexpr double kEpsilonCap = 1e6;      // search cap for scale-independent designs
constexpr double kFrequencyTol = 1e-9;   // rad/s, nominal-frequency requirement

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Precondition shared by all cascade certificates; returns an explanation
// when the cascade constants are not defined for these parameters.
std::string cascade_precondition(const SystemParams& params) {
    if (!(params.grid.r_g > 0.0))
        return "requires a resistive grid link (r_g > 0)";
    if (std::abs(params.omega_delta()) > kFrequencyTol)
        return "requires the grid at nominal frequency (omega_g = 1)";
    return {};
}

CertificateResult infeasible(const std::string& name, const std::string& tag,
                             const std::string& why) {
    CertificateResult r;
    r.name = name;
    r.paper_eq = tag;
    r.satisfied = false;
    r.margin = -std::numeric_limits<double>::infinity();
    r.detail = why;
    return r;
}

CertificateResult condition_droop_gain(const SystemParams& params,
                                       const CascadeCoefficients& k, double c1) {
    CertificateResult r;
    r.name = "droop_gain_small";
    r.paper_eq = "21b";
    if (!(c1 > 0.0)) {
        r.margin = -std::numeric_limits<double>::infinity();
        r.detail = "no admissible slow-level rate (c1 <= 0)";
        return r;
    }
    const double coupling = (params.l_g_seconds() / params.grid.r_g) *
                            params.y_mat().spectral_norm();
    const double bound = c1 / (coupling * (c1 + k.c_eps));
    r.margin = bound - params.ctrl.eta;
    r.satisfied = r.margin > 0.0;
    r.detail = "eta = " + fmt(params.ctrl.eta) + " rad/s vs bound " + fmt(bound);
    return r;
}

CertificateResult condition_voltage_loop(const SystemParams& params,
                                         const CascadeCoefficients& k, double c2) {
    CertificateResult r;
    r.name = "voltage_loop_fast";
    r.paper_eq = "21c";
    const double denom = params.filter.k_rv / params.c_f_seconds() - 1.0;
    if (!(denom > 0.0)) {
        r.margin = -std::numeric_limits<double>::infinity();
        r.detail = "voltage loop slower than its capacitor (k_rv <= c_f as seconds)";
        return r;
    }
    if (!(c2 > 0.0)) {
        r.margin = -std::numeric_limits<double>::infinity();
        r.detail = "no positive current-level rate (c2 <= 0)";
        return r;
    }
    const double lhs = (1.0 + params.filter.k_rv / params.filter.k_pv) / denom;
    const double rhs =
        4.0 * c2 / (k.beta23 * params.ctrl.eta * (k.c_eps * k.c_eps + 4.0));
    r.margin = rhs - lhs;
    r.satisfied = r.margin > 0.0;
    r.detail = "loop ratio " + fmt(lhs) + " vs cascade allowance " + fmt(rhs);
    return r;
}

CertificateResult condition_current_loop(const SystemParams& params,
                                         const CascadeCoefficients& k, double c3) {
    CertificateResult r;
    r.name = "current_loop_fast";
    r.paper_eq = "21d";
    const double denom = params.filter.k_rc / params.l_f_seconds() - 1.0;
    if (!(denom > 0.0)) {
        r.margin = -std::numeric_limits<double>::infinity();
        r.detail = "current loop slower than its inductor (k_rc <= l_f as seconds)";
        return r;
    }
    if (!(c3 > 0.0)) {
        r.margin = -std::numeric_limits<double>::infinity();
        r.detail = "no positive voltage-level rate (c3 <= 0)";
        return r;
    }
    const double lhs = (1.0 + params.filter.k_rc / params.filter.k_pc) / denom;
    const double b41 = k.beta41 / k.c_c;
    const double b42 = k.beta42 / k.c_c;
    const double b43 = k.beta43 / k.c_c;
    const double g4 = k.gamma4 / k.c_c;
    const double rhs = 4.0 * c3 /
                       ((k.beta34 / b43) * (b41 * b41 + b42 * b42 + 4.0 * b43 * b43) +
                        c3 * g4);
    r.margin = rhs - lhs;
    r.satisfied = r.margin > 0.0;
    r.detail = "loop ratio " + fmt(lhs) + " vs cascade allowance " + fmt(rhs);
    return r;
}

}  // namespace

double roa_radius(double epsilon, double v_s_norm) {
    if (!(epsilon > kEpsilonInfimum))
        throw std::domain_error("roa_radius: region scale requires epsilon > 3");
    if (!(v_s_norm > 0.0))
        throw std::domain_error("roa_radius: equilibrium magnitude must be > 0");
    // ((1+u)^3 - 1)/u is increasing with infimum 3 at u = 0.
    auto excess = [epsilon](double u) {
        return ((1.0 + u) * (1.0 + u) * (1.0 + u) - 1.0) / u - epsilon;
    };
    double lo = 0.0, hi = 1.0;
    while (excess(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) * v_s_norm;
}

CascadeCoefficients cascade_coefficients(const SystemParams& params,
                                         const EquilibriumPoint& point, double epsilon) {
    if (!(epsilon >= kEpsilonInfimum))
        throw std::invalid_argument("cascade_coefficients: epsilon must be >= 3");
    CascadeCoefficients k;
    k.epsilon = epsilon;
    k.x = point.x;

    const Kappa kp = kappa(params);
    const double alpha = params.ctrl.alpha;
    const double ratio = point.x / (params.ctrl.v_star * params.ctrl.v_star);
    const double eta = params.ctrl.eta;
    const double cfs = params.c_f_seconds();
    const double lfs = params.l_f_seconds();
    const double lgs = params.l_g_seconds();
    const auto& f = params.filter;

    k.alpha1 = -kp.kr - alpha + 0.5 * alpha * ratio;
    k.alpha2 = 1.0;
    k.alpha3 = 1.0 - cfs / f.k_rv;
    k.alpha4 = 1.0 - lfs / f.k_rc;
    k.beta12 = 1.0;
    k.beta23 = 1.0 / params.grid.r_g;
    k.beta34 = 1.0 / f.k_pv + 1.0 / f.k_rv;

    k.c_eps = std::hypot(kp.kr + alpha, kp.ki) + alpha * epsilon * ratio;
    k.c_v = cfs * (1.0 / f.k_pv + 1.0 / f.k_rv);
    k.c_c = lfs * (1.0 / f.k_pc + 1.0 / f.k_rc);

    const double y_norm = params.y_mat().spectral_norm();
    const double z_norm = params.z_mat().spectral_norm();
    const double lg_over_rg = lgs / params.grid.r_g;
    const double yf_gap =
        (params.y_f_mat() - Mat2::identity() * f.k_pv).spectral_norm();

    k.beta21 = k.c_eps * eta * lg_over_rg * y_norm;
    k.gamma2 = eta * lg_over_rg * y_norm;
    k.beta31 = k.c_eps * k.c_v * eta;
    k.beta32 = k.c_v * eta;
    k.gamma3 = 0.0;
    k.beta41 = k.c_eps * k.c_c * eta * f.k_pv;
    k.beta42 = k.c_c * eta * f.k_pv + k.c_c * z_norm / lgs;
    k.beta43 = k.c_c / lgs + k.c_c * (yf_gap * (f.k_pv + f.k_rv) / cfs + f.k_rv);
    k.gamma4 = k.c_c * yf_gap / cfs;

    k.mu1 = 1.0;
    k.mu2 = k.beta12 / k.beta21;
    k.mu3 = k.mu2 * k.beta23 / k.beta32;
    k.mu4 = k.mu3 * k.beta34 / k.beta43;
    return k;
}

Eigen::Matrix4d composite_matrix(const CascadeCoefficients& k) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = k.alpha1 * k.mu1;
    m(1, 1) = (k.alpha2 - k.gamma2) * k.mu2;
    m(2, 2) = (k.alpha3 - k.gamma3) * k.mu3;
    m(3, 3) = (k.alpha4 - k.gamma4) * k.mu4;
    m(0, 1) = m(1, 0) = -k.beta21 * k.mu2;
    m(0, 2) = m(2, 0) = -0.5 * k.beta31 * k.mu3;
    m(1, 2) = m(2, 1) = -k.beta32 * k.mu3;
    m(0, 3) = m(3, 0) = -0.5 * k.beta41 * k.mu4;
    m(1, 3) = m(3, 1) = -0.5 * k.beta42 * k.mu4;
    m(2, 3) = m(3, 2) = -k.beta43 * k.mu4;
    return m;
}

double composite_min_eigenvalue(const CascadeCoefficients& k) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(composite_matrix(k));
    return solver.eigenvalues().minCoeff();
}

DecayRates decay_rates(const CascadeCoefficients& k, double c1) {
    // Each level solves the same 2x2 reduction: the smaller root of
    //   c^2 - T c + ((alpha - gamma) * r * c_prev - b'b) = 0
    // is the rate the level adds to the chain; its discriminant equals
    // (T - 2(alpha-gamma))^2 + 4 b'b, so it is never negative.
    auto next_rate = [](double self, double forward, double backward, double bb,
                        double c_prev) {
        const double r = backward / forward;
        const double t = self + r * c_prev;
        const double d = t * t + 4.0 * (bb - self * r * c_prev);
        return 0.5 * (t - std::sqrt(std::max(0.0, d)));
    };
    DecayRates rates;
    rates.c1 = c1;
    rates.c2 = next_rate(k.alpha2 - k.gamma2, k.beta12, k.beta21,
                         k.beta21 * k.beta21, c1);
    rates.c3 = next_rate(k.alpha3 - k.gamma3, k.beta23, k.beta32,
                         0.25 * k.beta31 * k.beta31 + k.beta32 * k.beta32, rates.c2);
    return rates;
}

FullOrderCertificate check_full_order(const SystemParams& params,
                                      const EquilibriumPoint& point, double epsilon,
                                      std::optional<double> c1) {
    params.validate();
    if (!(epsilon >= kEpsilonInfimum))
        throw std::invalid_argument("check_full_order: epsilon must be >= 3");

    FullOrderCertificate cert;
    if (const std::string why = cascade_precondition(params); !why.empty()) {
        cert.overall = infeasible("nested_loop_stability", "t3", why);
        cert.tuning_feasible = infeasible("tuning_feasible", "21a", why);
        cert.droop_gain_small = infeasible("droop_gain_small", "21b", why);
        cert.voltage_loop_fast = infeasible("voltage_loop_fast", "21c", why);
        cert.current_loop_fast = infeasible("current_loop_fast", "21d", why);
        return cert;
    }

    cert.coefficients = cascade_coefficients(params, point, epsilon);
    const CascadeCoefficients& k = cert.coefficients;
    // Without an explicit c1 the question is existential: does some rate in
    // (0, alpha1) satisfy all downstream conditions? Those conditions only
    // improve as c1 grows, so the c1 -> alpha1 limit decides it (the interval
    // is open, but any shortfall of the limit from an interior point is
    // infinitesimal, and a strict limit inequality is attained just inside).
    const double c1_value = c1.value_or(k.alpha1);
    cert.rates = decay_rates(k, c1_value);

    cert.tuning_feasible.name = "tuning_feasible";
    cert.tuning_feasible.paper_eq = "21a";
    if (c1) {
        cert.tuning_feasible.margin = std::min(c1_value, k.alpha1 - c1_value);
        cert.tuning_feasible.satisfied = c1_value > 0.0 && c1_value < k.alpha1;
        cert.tuning_feasible.detail =
            "c1 = " + fmt(c1_value) + " must lie in (0, " + fmt(k.alpha1) + ")";
    } else {
        cert.tuning_feasible.margin = k.alpha1;
        cert.tuning_feasible.satisfied = k.alpha1 > 0.0;
        cert.tuning_feasible.detail =
            "any c1 in (0, " + fmt(k.alpha1) +
            ") works; conditions evaluated in the c1 -> alpha1 limit";
    }

    cert.droop_gain_small = condition_droop_gain(params, k, c1_value);
    cert.voltage_loop_fast = condition_voltage_loop(params, k, cert.rates.c2);
    cert.current_loop_fast = condition_current_loop(params, k, cert.rates.c3);

    cert.region_radius_pu =
        epsilon > kEpsilonInfimum ? roa_radius(epsilon, point.v_s) : 0.0;

    cert.overall.name = "nested_loop_stability";
    cert.overall.paper_eq = "t3";
    cert.overall.satisfied = cert.tuning_feasible.satisfied &&
                             cert.droop_gain_small.satisfied &&
                             cert.voltage_loop_fast.satisfied &&
                             cert.current_loop_fast.satisfied;
    cert.overall.margin = std::min(
        std::min(cert.tuning_feasible.margin, cert.droop_gain_small.margin),
        std::min(cert.voltage_loop_fast.margin, cert.current_loop_fast.margin));
    cert.overall.detail = cert.overall.satisfied
                              ? "exponential decay on a radius of " +
                                    fmt(cert.region_radius_pu) + " pu"
                              : "at least one cascade condition fails";
    return cert;
}

EpsilonRange epsilon_range(const SystemParams& params, const EquilibriumPoint& point,
                           bool include_current_loop) {
    params.validate();
    EpsilonRange out;
    if (!cascade_precondition(params).empty()) return out;

    // Rates are continuous and nondecreasing in c1, so the supremum c1 ->
    // alpha1 decides feasibility for every admissible choice.
    auto feasible_at = [&](double eps) {
        const CascadeCoefficients k = cascade_coefficients(params, point, eps);
        if (!(k.alpha1 > 0.0)) return false;
        const DecayRates rates = decay_rates(k, k.alpha1);
        if (!condition_droop_gain(params, k, k.alpha1).satisfied) return false;
        if (!condition_voltage_loop(params, k, rates.c2).satisfied) return false;
        if (include_current_loop &&
            !condition_current_loop(params, k, rates.c3).satisfied)
            return false;
        return true;
    };

    if (!feasible_at(kEpsilonInfimum)) return out;
    out.feasible = true;
    out.epsilon_max = kEpsilonInfimum;

    if (feasible_at(kEpsilonCap)) {
        out.epsilon_max = kEpsilonCap;
        out.open_ended = true;
    } else {
        // The region-scale bound c_eps grows with epsilon, so feasibility is
        // monotone and bisection applies.
        double lo = kEpsilonInfimum, hi = kEpsilonCap;
        for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (feasible_at(mid) ? lo : hi) = mid;
        }
        out.epsilon_max = lo;
    }
    out.radius_pu = out.epsilon_max > kEpsilonInfimum
                        ? roa_radius(out.epsilon_max, point.v_s)
                        : 0.0;
    return out;
}

}  // namespace cdroop
