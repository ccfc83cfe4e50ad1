#include "cdroop/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdroop {

namespace {

// Dormand-Prince 5(4) tableau. The 5th-order weights b feed the solution,
// the embedded 4th-order weights bs feed the error estimate; the last stage
// is the derivative at the new point (first-same-as-last).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double bs1 = 5179.0 / 57600, bs3 = 7571.0 / 16695, bs4 = 393.0 / 640,
                 bs5 = -92097.0 / 339200, bs6 = 187.0 / 2100, bs7 = 1.0 / 40;

constexpr double kMagnitudeLimit = 1e12;  // any |state| beyond this is a blow-up
constexpr double kMinStepScale = 1e-14;   // step below this * max(1, |t|): stiff collapse

double tiny_at(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

bool state_ok(const std::vector<double>& y) {
    for (double v : y)
        if (!std::isfinite(v) || std::abs(v) > kMagnitudeLimit) return false;
    return true;
}

}  // namespace

const SystemParams& Trajectory::params_at(double ts) const {
    std::size_t i = segments.size();
    while (i > 1 && segments[i - 1].t_start > ts) --i;
    return segments.at(i - 1).params;
}

Trajectory integrate(const SystemParams& params0, ModelOrder order,
                     const std::vector<double>& x0, const IntegratorConfig& cfg,
                     const std::vector<Event>& events, bool stationary_frame) {
    const int n = dimension(order);
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("integrate: state size does not match model order");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be > 0");
    if (!(cfg.output_dt > 0.0))
        throw std::invalid_argument("integrate: output_dt must be > 0");
    if (cfg.method == IntegratorConfig::Method::rk4 && !(cfg.fixed_step > 0.0))
        throw std::invalid_argument("integrate: fixed_step must be > 0");

    Trajectory traj;
    traj.order = order;
    traj.stationary_frame = stationary_frame;

    std::vector<Event> evs(events);
    std::stable_sort(evs.begin(), evs.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    traj.events = evs;

    SystemParams params = params0;
    std::size_t ei = 0;
    while (ei < evs.size() && evs[ei].t <= 0.0) {
        set_param_field(params, evs[ei].field, evs[ei].value);
        ++ei;
    }
    params.validate();

    // Uniform output grid; the final time is always a sample.
    std::vector<double> out_times;
    for (std::int64_t k = 0;; ++k) {
        const double tk = static_cast<double>(k) * cfg.output_dt;
        if (tk > cfg.t_end + tiny_at(cfg.t_end)) break;
        out_times.push_back(std::min(tk, cfg.t_end));
    }
    if (out_times.back() < cfg.t_end - tiny_at(cfg.t_end)) out_times.push_back(cfg.t_end);

    std::vector<double> y = x0;
    double t = 0.0;
    std::size_t out_idx = 0;

    auto emit = [&](double ts) {
        traj.t.push_back(ts);
        traj.x.insert(traj.x.end(), y.begin(), y.end());
    };
    emit(out_times[out_idx]);
    ++out_idx;

    const bool adaptive = cfg.method == IntegratorConfig::Method::rk45;
    double h_suggest = std::min({cfg.output_dt, 1e-4, cfg.t_end});

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), yerr(n);

    auto diverge = [&](double when) {
        traj.diverged = true;
        traj.diverged_at = when;
    };

    bool stop = false;
    while (!stop && !traj.diverged && !traj.stats.step_limit_hit &&
           t < cfg.t_end - tiny_at(cfg.t_end)) {
        // Segment: constant parameters until the next event (or the end).
        double t_seg_end = cfg.t_end;
        const bool have_event = ei < evs.size() && evs[ei].t < cfg.t_end - tiny_at(cfg.t_end);
        if (have_event) t_seg_end = evs[ei].t;

        traj.segments.push_back({t, params});
        const CompiledModel model(params, order, stationary_frame);
        bool fsal_valid = false;

        while (t < t_seg_end - tiny_at(t_seg_end)) {
            if (traj.stats.steps + traj.stats.rejected >= cfg.max_steps) {
                traj.stats.step_limit_hit = true;
                break;
            }
            // Output times already reached (segment boundaries may sit on the
            // grid) are emitted before taking a step.
            if (out_idx < out_times.size() && out_times[out_idx] - t <= tiny_at(t)) {
                t = out_times[out_idx];
                emit(out_times[out_idx]);
                ++out_idx;
                continue;
            }

            double cap = t_seg_end - t;
            if (out_idx < out_times.size()) cap = std::min(cap, out_times[out_idx] - t);

            if (adaptive) {
                const double h_want = std::min(h_suggest, cap);
                bool capped = h_want < h_suggest;
                double h = h_want;
                for (;;) {
                    if (h < kMinStepScale * std::max(1.0, std::abs(t))) {
                        diverge(t);
                        break;
                    }
                    if (!fsal_valid) {
                        model.rhs(y.data(), k1.data());
                        ++traj.stats.rhs_evals;
                        fsal_valid = true;
                    }
                    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
                    model.rhs(ytmp.data(), k2.data());
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
                    model.rhs(ytmp.data(), k3.data());
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
                    model.rhs(ytmp.data(), k4.data());
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                              a54 * k4[i]);
                    model.rhs(ytmp.data(), k5.data());
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                              a64 * k4[i] + a65 * k5[i]);
                    model.rhs(ytmp.data(), k6.data());
                    for (int i = 0; i < n; ++i)
                        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                              b5 * k5[i] + b6 * k6[i]);
                    model.rhs(ynew.data(), k7.data());
                    traj.stats.rhs_evals += 6;

                    double sum = 0.0;
                    for (int i = 0; i < n; ++i) {
                        yerr[i] = h * ((b1 - bs1) * k1[i] + (b3 - bs3) * k3[i] +
                                       (b4 - bs4) * k4[i] + (b5 - bs5) * k5[i] +
                                       (b6 - bs6) * k6[i] - bs7 * k7[i]);
                        const double scale =
                            cfg.atol +
                            cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                        const double r = yerr[i] / scale;
                        sum += r * r;
                    }
                    const double err = std::sqrt(sum / n);

                    if (!std::isfinite(err)) {
                        ++traj.stats.rejected;
                        h *= 0.2;
                        capped = false;
                        continue;
                    }
                    const double factor =
                        std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                    if (err <= 1.0) {
                        std::swap(y, ynew);
                        std::swap(k1, k7);  // derivative at the accepted point
                        t += h;
                        ++traj.stats.steps;
                        const double h_next = h * factor;
                        h_suggest = capped ? std::max(h_suggest, h_next) : h_next;
                        break;
                    }
                    ++traj.stats.rejected;
                    h *= factor;
                    capped = false;
                }
            } else {
                const double h = std::min(cfg.fixed_step, cap);
                model.rhs(y.data(), k1.data());
                for (int i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
                model.rhs(ytmp.data(), k2.data());
                for (int i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
                model.rhs(ytmp.data(), k3.data());
                for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
                model.rhs(ytmp.data(), k4.data());
                traj.stats.rhs_evals += 4;
                for (int i = 0; i < n; ++i)
                    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                t += h;
                ++traj.stats.steps;
            }
            if (traj.diverged) break;

            if (!state_ok(y)) {
                diverge(t);
                break;
            }
            if (out_idx < out_times.size() &&
                t >= out_times[out_idx] - tiny_at(out_times[out_idx])) {
                t = out_times[out_idx];
                emit(out_times[out_idx]);
                ++out_idx;
            }
        }
        if (traj.diverged || traj.stats.step_limit_hit) break;

        t = t_seg_end;
        if (have_event) {
            while (ei < evs.size() && evs[ei].t <= t_seg_end + tiny_at(t_seg_end)) {
                set_param_field(params, evs[ei].field, evs[ei].value);
                ++ei;
            }
            params.validate();
        } else {
            stop = true;
        }
    }
    return traj;
}

}  // namespace cdroop
