#include "cdroop/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "cdroop/certify.hpp"
#include "cdroop/equilibrium.hpp"
#include "cdroop/observables.hpp"
#include "cdroop/perturbation.hpp"

namespace cdroop {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kDefaultEpsilon = 4.0;  // region scale when the scenario sets none

void append17(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

json cert_json(const CertificateResult& c) {
    return {{"name", c.name},
            {"satisfied", c.satisfied},
            {"margin", c.margin},
            {"detail", c.detail},
            {"paper_eq", c.paper_eq}};
}

json point_json(const SystemParams& params, const EquilibriumPoint& p) {
    json certs = json::array();
    certs.push_back(cert_json(check_global(params, p)));
    certs.push_back(cert_json(check_local_sufficient(params, p)));
    certs.push_back(cert_json(check_local_eigenvalues(params, p)));
    certs.push_back(cert_json(check_unstable(params, p)));
    return {{"x", p.x},
            {"v_s", p.v_s},
            {"delta_s", p.delta_s},
            {"consistency", p.consistency},
            {"residual_amplitude", p.residual_amp},
            {"residual_angle", p.residual_ang},
            {"certificates", certs}};
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::string out;
    out.reserve(traj.samples() * 24 * (traj.dim() + 6) + 256);
    out += "t";
    for (const std::string& name : state_component_names(traj.order)) {
        out += ',';
        out += name;
    }
    out += ",p,q,v,omega,eps\n";

    std::size_t seg = 0;
    CompiledModel model(traj.segments.empty() ? SystemParams{}
                                              : traj.segments.front().params,
                        traj.order, traj.stationary_frame);
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        while (seg + 1 < traj.segments.size() &&
               traj.t[i] >= traj.segments[seg + 1].t_start) {
            ++seg;
            model = CompiledModel(traj.segments[seg].params, traj.order,
                                  traj.stationary_frame);
        }
        const double* x = traj.sample(i);
        const DerivedSignals d = derived_signals(model, x);
        append17(out, traj.t[i]);
        for (int k = 0; k < traj.dim(); ++k) {
            out += ',';
            append17(out, x[k]);
        }
        for (double v : {d.p, d.q, d.v, d.omega, d.eps}) {
            out += ',';
            append17(out, v);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

std::string certificates_report(const Scenario& s) {
    const SystemParams& params = s.params;
    json root;
    root["schema_version"] = kSchemaVersion;
    root["scenario"] = s.name;
    root["frame"] = s.stationary_frame ? "stationary" : "synchronous";

    const EquilibriumSet set = equilibria(params);

    json conditions = json::array();
    {
        CertificateResult unique;
        unique.name = "unique_steady_state";
        unique.paper_eq = "p4";
        unique.satisfied = set.unique;
        unique.margin = -set.discriminant;
        unique.detail = set.degenerate
                            ? "degenerate amplitude dynamics (alpha = 0)"
                            : std::to_string(set.points.size()) + " steady state(s)";
        if (set.marginal) unique.detail += "; uniqueness numerically undecidable";
        conditions.push_back(cert_json(unique));
    }
    conditions.push_back(cert_json(check_global_parameter_only(params)));
    conditions.push_back(cert_json(check_voltage_following(params)));
    {
        const double v_m = voltage_bound(params);
        CertificateResult bound;
        bound.name = "voltage_bound";
        bound.paper_eq = "p7";
        bound.satisfied = std::isfinite(v_m);
        bound.margin = v_m;
        bound.detail = "the oscillator voltage never exceeds max(initial magnitude, margin)";
        conditions.push_back(cert_json(bound));
    }
    if (s.stationary_frame)
        conditions.push_back(cert_json(off_grid_prediction(params).certificate));
    root["parameter_conditions"] = conditions;

    json eq;
    eq["count"] = set.points.size();
    eq["unique"] = set.unique;
    eq["marginal"] = set.marginal;
    eq["degenerate"] = set.degenerate;
    eq["discriminant"] = set.discriminant;
    eq["diagnostics"] = set.diagnostics;
    json pts = json::array();
    for (const EquilibriumPoint& p : set.points) pts.push_back(point_json(params, p));
    eq["points"] = pts;
    root["equilibria"] = eq;

    if (s.analyses.certify_full) {
        json fo;
        const auto point = select_operating_point(params, set);
        if (!point) {
            fo["feasible"] = false;
            fo["detail"] = "no steady state to certify";
        } else {
            const double epsilon = s.analyses.epsilon.value_or(kDefaultEpsilon);
            const FullOrderCertificate cert = check_full_order(params, *point, epsilon);
            fo["epsilon"] = epsilon;
            fo["operating_point_v_s"] = point->v_s;
            fo["region_radius_pu"] = cert.region_radius_pu;
            fo["decay_rates"] = {{"c1", cert.rates.c1},
                                 {"c2", cert.rates.c2},
                                 {"c3", cert.rates.c3}};
            json cc = json::array();
            cc.push_back(cert_json(cert.tuning_feasible));
            cc.push_back(cert_json(cert.droop_gain_small));
            cc.push_back(cert_json(cert.voltage_loop_fast));
            cc.push_back(cert_json(cert.current_loop_fast));
            cc.push_back(cert_json(cert.overall));
            fo["conditions"] = cc;

            const EpsilonRange range = epsilon_range(params, *point);
            fo["epsilon_range"] = {{"feasible", range.feasible},
                                   {"epsilon_max", range.epsilon_max},
                                   {"open_ended", range.open_ended},
                                   {"radius_pu", range.radius_pu}};
        }
        root["full_order"] = fo;
    }
    return root.dump(2) + "\n";
}

std::string analysis_report(const RunArtifacts& run) {
    const Scenario& s = run.scenario;
    json root;
    root["schema_version"] = kSchemaVersion;
    root["scenario"] = s.name;
    root["description"] = s.description;
    root["model_order"] = static_cast<int>(s.order);
    root["frame"] = s.stationary_frame ? "stationary" : "synchronous";
    root["seed"] = run.seed;
    root["voltage_bound_pu"] = voltage_bound(s.params);

    if (run.classification) {
        const ClassifyResult& c = *run.classification;
        json o;
        o["outcome"] = outcome_name(c.outcome);
        o["equilibrium_index"] = c.equilibrium_index;
        o["distance"] = c.distance;
        o["cycle_radius"] = c.cycle_radius;
        o["cycle_period"] = c.cycle_period;
        o["detail"] = c.detail;
        root["outcome"] = o;
    }

    if (s.stationary_frame) {
        const OffGridPrediction pred = off_grid_prediction(s.params);
        root["off_grid_prediction"] = {{"converges_to_origin", pred.converges_to_origin},
                                       {"algebraic_decay", pred.algebraic_decay},
                                       {"has_limit_cycle", pred.has_limit_cycle},
                                       {"cycle_radius_pu", pred.cycle_radius},
                                       {"cycle_rate_rad_s", pred.cycle_rate},
                                       {"cycle_period_s", pred.cycle_period}};
    }

    if (run.boundary) {
        const BoundaryResult& b = *run.boundary;
        const double w0 = s.params.omega0();
        root["boundary"] = {{"eta_empirical_rad_s", b.eta_empirical},
                            {"eta_empirical_pu", b.eta_empirical / w0},
                            {"bracket_valid", b.bracket_valid},
                            {"eta_analytic_rad_s", b.eta_analytic},
                            {"eta_analytic_pu", b.eta_analytic / w0},
                            {"analytic_feasible", b.analytic_feasible},
                            {"simulations", b.simulations}};
    }

    if (run.portrait) {
        const PhasePortrait& p = *run.portrait;
        double worst = 0.0;
        for (const PortraitCell& cell : p.cells)
            worst = std::max(worst, cell.bound_violation);
        root["phase_portrait"] = {{"grid_n", p.grid_n},
                                  {"converged", p.converged},
                                  {"limit_cycles", p.limit_cycles},
                                  {"diverged", p.diverged},
                                  {"undecided", p.undecided},
                                  {"skipped", p.skipped},
                                  {"max_bound_violation", worst}};
    }

    json evs = json::array();
    const std::vector<Event>& schedule =
        run.trajectory ? run.trajectory->events : s.events;
    for (const Event& e : schedule)
        evs.push_back({{"t", e.t}, {"set", e.field}, {"value", e.value}});
    root["events"] = evs;

    if (run.trajectory) {
        const Trajectory& tr = *run.trajectory;
        root["integrator"] = {{"steps", tr.stats.steps},
                              {"rejected", tr.stats.rejected},
                              {"rhs_evals", tr.stats.rhs_evals},
                              {"step_limit_hit", tr.stats.step_limit_hit}};
        root["diverged"] = tr.diverged;
        if (tr.diverged) root["diverged_at"] = tr.diverged_at;
        root["samples"] = tr.samples();
        if (!tr.t.empty()) root["t_final"] = tr.t.back();
    }
    return root.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace cdroop
