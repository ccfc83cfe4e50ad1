#include "cdroop/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstdio>
#include <limits>
#include <vector>

#include "cdroop/certify.hpp"

namespace cdroop {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Vec2 vhat_at(const Trajectory& traj, std::size_t i) {
    const double* s = traj.sample(i);
    return {s[kVhat], s[kVhat + 1]};
}

}  // namespace

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::converged: return "Converged";
        case Outcome::limit_cycle: return "LimitCycle";
        case Outcome::diverged: return "Diverged";
        case Outcome::undecided: return "Undecided";
    }
    return "Undecided";
}

ClassifyResult classify(const Trajectory& traj, const ClassifyConfig& cfg) {
    ClassifyResult res;
    const std::size_t n = traj.samples();

    if (traj.diverged) {
        res.outcome = Outcome::diverged;
        res.detail = "integration diverged at t = " + fmt(traj.diverged_at) + " s";
        return res;
    }
    if (n < 8) {
        res.detail = "too few samples";
        return res;
    }

    const SystemParams& params = traj.segments.back().params;

    // Blow-up past the voltage bound (only meaningful with amplitude
    // regulation; the bound is infinite otherwise).
    const double v_max_allowed = cfg.divergence_factor * voltage_bound(params);
    for (std::size_t i = 0; i < n; ++i) {
        if (vhat_at(traj, i).norm() > v_max_allowed) {
            res.outcome = Outcome::diverged;
            res.detail = "oscillator magnitude exceeded " + fmt(v_max_allowed) +
                         " pu at t = " + fmt(traj.t[i]) + " s";
            return res;
        }
    }

    // Steady-state targets of the final parameter set.
    std::vector<Vec2> targets;
    if (traj.stationary_frame) {
        targets.push_back(Vec2{0.0, 0.0});
    } else {
        for (const auto& p : equilibria(params).points) targets.push_back(p.v_rect);
    }

    // Convergence: the trailing window stays within tolerance of one target.
    const std::size_t term_begin =
        n - std::max<std::size_t>(2, static_cast<std::size_t>(cfg.terminal_window * n));
    double best = std::numeric_limits<double>::infinity();
    int best_idx = -1;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        double worst = 0.0;
        for (std::size_t i = term_begin; i < n; ++i)
            worst = std::max(worst, (vhat_at(traj, i) - targets[k]).norm());
        if (worst < best) {
            best = worst;
            best_idx = static_cast<int>(k);
        }
    }
    if (best_idx >= 0 && best < cfg.converge_tol) {
        res.outcome = Outcome::converged;
        res.equilibrium_index = best_idx;
        res.distance = best;
        res.detail = "terminal distance " + fmt(best) + " pu";
        return res;
    }

    // Periodic orbit: hits of the half-line running along +d from the orbit
    // centroid, counted in the orbit's own direction of rotation.
    const std::size_t cen_begin =
        n - std::max<std::size_t>(2, static_cast<std::size_t>(cfg.centroid_window * n));
    Vec2 centroid{0.0, 0.0};
    for (std::size_t i = cen_begin; i < n; ++i) centroid += vhat_at(traj, i);
    centroid = centroid * (1.0 / static_cast<double>(n - cen_begin));

    const std::size_t scan_begin = std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.transient_discard * n));
    double signed_area = 0.0;
    for (std::size_t i = scan_begin; i < n; ++i)
        signed_area += cross(vhat_at(traj, i - 1) - centroid,
                             vhat_at(traj, i) - centroid);
    const bool ccw = signed_area >= 0.0;

    std::vector<double> hit_times, hit_radii;
    for (std::size_t i = scan_begin; i < n; ++i) {
        const Vec2 prev = vhat_at(traj, i - 1) - centroid;
        const Vec2 cur = vhat_at(traj, i) - centroid;
        const bool crossed =
            ccw ? (prev.q < 0.0 && cur.q >= 0.0) : (prev.q >= 0.0 && cur.q < 0.0);
        if (!crossed) continue;
        const double theta = prev.q / (prev.q - cur.q);
        const Vec2 hit = prev + (cur - prev) * theta;
        if (!(hit.d > 0.0)) continue;
        hit_times.push_back(traj.t[i - 1] + theta * (traj.t[i] - traj.t[i - 1]));
        hit_radii.push_back(hit.norm());
    }

    if (static_cast<int>(hit_times.size()) >= cfg.min_crossings) {
        const auto [rmin, rmax] = std::minmax_element(hit_radii.begin(), hit_radii.end());
        std::vector<double> periods(hit_times.size() - 1);
        for (std::size_t i = 1; i < hit_times.size(); ++i)
            periods[i - 1] = hit_times[i] - hit_times[i - 1];
        const auto [pmin, pmax] = std::minmax_element(periods.begin(), periods.end());
        const double pmean =
            std::accumulate(periods.begin(), periods.end(), 0.0) / periods.size();
        const double rspread = *rmax - *rmin;
        const double pspread = (*pmax - *pmin) / pmean;
        if (rspread < cfg.radius_spread_tol && pspread < cfg.period_spread_tol) {
            res.outcome = Outcome::limit_cycle;
            res.cycle_radius =
                std::accumulate(hit_radii.begin(), hit_radii.end(), 0.0) /
                hit_radii.size();
            res.cycle_period = pmean;
            res.detail = "section hits " + fmt(static_cast<double>(hit_times.size())) +
                         ", radius spread " + fmt(rspread) + " pu, period spread " +
                         fmt(pspread);
            return res;
        }
        res.detail = "section hit but not settled (radius spread " + fmt(rspread) +
                     " pu, period spread " + fmt(pspread) + ")";
        return res;
    }

    res.detail = "terminal distance " + fmt(best) + " pu, " +
                 fmt(static_cast<double>(hit_times.size())) + " section hits";
    return res;
}

}  // namespace cdroop
