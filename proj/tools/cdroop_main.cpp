#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cdroop/certify.hpp"
#include "cdroop/classify.hpp"
#include "cdroop/equilibrium.hpp"
#include "cdroop/integrate.hpp"
#include "cdroop/observables.hpp"
#include "cdroop/perturbation.hpp"
#include "cdroop/report.hpp"
#include "cdroop/scenario.hpp"
#include "cdroop/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenario = 2;   // unreadable, invalid, or inconsistent scenario
constexpr int kExitNumerical = 3;  // integration diverged or hit its step limit

cdroop::Scenario load_scenario(const std::string& ref) {
    if (const cdroop::Scenario* preset = cdroop::find_preset(ref)) return *preset;
    std::ifstream in(ref);
    if (!in)
        throw cdroop::ScenarioError(ref, "not a preset name and not a readable file");
    std::ostringstream text;
    text << in.rdbuf();
    cdroop::Scenario s = cdroop::scenario_from_json(text.str());
    if (s.name.empty()) s.name = std::filesystem::path(ref).stem().string();
    return s;
}

// Parameters in force once the whole event schedule has been applied; the
// phase portrait studies the post-disturbance vector field.
cdroop::SystemParams params_after_events(const cdroop::Scenario& s) {
    cdroop::SystemParams p = s.params;
    for (const cdroop::Event& e : s.events) cdroop::set_param_field(p, e.field, e.value);
    return p;
}

std::string output_dir(const cdroop::Scenario& s, const std::string& requested) {
    std::string dir = requested;
    if (dir.empty()) dir = (s.name.empty() ? "run" : s.name) + "_out";
    std::filesystem::create_directories(dir);
    return dir;
}

void print_condition(const cdroop::CertificateResult& c) {
    std::printf("  [%s] %-28s margin % .6g  %s\n", c.satisfied ? "ok" : "--",
                c.name.c_str(), c.margin, c.detail.c_str());
}

int cmd_run(const std::string& ref, const std::string& out, std::uint64_t seed) {
    cdroop::Scenario s = load_scenario(ref);
    const std::string dir = output_dir(s, out);
    std::printf("scenario %s: order %d, %s frame\n", s.name.c_str(),
                static_cast<int>(s.order), s.stationary_frame ? "stationary" : "synchronous");

    cdroop::RunArtifacts run;
    run.scenario = s;
    run.seed = seed;
    bool numerical_failure = false;

    if (s.analyses.simulate) {
        const std::vector<double> x0 = cdroop::initial_state(s);
        run.trajectory = cdroop::integrate(s.params, s.order, x0, s.integrator,
                                           s.events, s.stationary_frame);
        if (run.trajectory->diverged) {
            numerical_failure = true;
            std::fprintf(stderr, "integration diverged at t = %.6f s\n",
                         run.trajectory->diverged_at);
        }
        if (run.trajectory->stats.step_limit_hit) {
            numerical_failure = true;
            std::fprintf(stderr, "integration hit the step limit\n");
        }
        const std::string csv = dir + "/" + s.outputs.trajectory_csv;
        cdroop::write_trajectory_csv(csv, *run.trajectory);
        std::printf("wrote %s (%zu samples, %lld steps)\n", csv.c_str(),
                    run.trajectory->samples(),
                    static_cast<long long>(run.trajectory->stats.steps));
        if (s.analyses.classify) {
            run.classification = cdroop::classify(*run.trajectory, cdroop::ClassifyConfig{});
            std::printf("outcome: %s (%s)\n",
                        cdroop::outcome_name(run.classification->outcome),
                        run.classification->detail.c_str());
        }
    }

    if (s.analyses.boundary_sweep) {
        run.boundary = cdroop::stability_boundary(s.params);
        const double w0 = s.params.omega0();
        std::printf("boundary: empirical %.6f omega0 (%s), analytic %.6f omega0 (%s), "
                    "%lld simulations\n",
                    run.boundary->eta_empirical / w0,
                    run.boundary->bracket_valid ? "bracketed" : "bracket invalid",
                    run.boundary->eta_analytic / w0,
                    run.boundary->analytic_feasible ? "feasible" : "infeasible",
                    static_cast<long long>(run.boundary->simulations));
    }

    if (s.analyses.phase_portrait) {
        run.portrait = cdroop::phase_portrait(params_after_events(s));
        std::printf("portrait: %d converged, %d limit cycles, %d diverged, "
                    "%d undecided, %d skipped\n",
                    run.portrait->converged, run.portrait->limit_cycles,
                    run.portrait->diverged, run.portrait->undecided,
                    run.portrait->skipped);
    }

    if (s.analyses.certify2 || s.analyses.certify_full) {
        const std::string path = dir + "/" + s.outputs.certificates_json;
        cdroop::write_text_file(path, cdroop::certificates_report(s));
        std::printf("wrote %s\n", path.c_str());
    }
    const std::string path = dir + "/" + s.outputs.analysis_json;
    cdroop::write_text_file(path, cdroop::analysis_report(run));
    std::printf("wrote %s\n", path.c_str());
    return numerical_failure ? kExitNumerical : kExitOk;
}

int cmd_certify(const std::string& ref, double epsilon, const std::string& out) {
    cdroop::Scenario s = load_scenario(ref);
    s.analyses.certify_full = true;
    if (epsilon > 0.0) {
        if (!(epsilon > 3.0))
            throw cdroop::ScenarioError("--epsilon", "the region scale must exceed 3");
        s.analyses.epsilon = epsilon;
    }
    const std::string dir = output_dir(s, out);
    const std::string path = dir + "/" + s.outputs.certificates_json;
    cdroop::write_text_file(path, cdroop::certificates_report(s));

    std::printf("parameter conditions (%s):\n", s.name.c_str());
    const cdroop::EquilibriumSet set = cdroop::equilibria(s.params);
    print_condition(cdroop::check_global_parameter_only(s.params));
    print_condition(cdroop::check_voltage_following(s.params));
    std::printf("steady states: %zu%s\n", set.points.size(),
                set.unique ? " (unique)" : set.marginal ? " (uniqueness undecidable)" : "");
    for (const cdroop::EquilibriumPoint& p : set.points) {
        std::printf("  v_s = %.6f pu, angle = %.6f rad:\n", p.v_s, p.delta_s);
        print_condition(cdroop::check_global(s.params, p));
        print_condition(cdroop::check_local_sufficient(s.params, p));
        print_condition(cdroop::check_local_eigenvalues(s.params, p));
        print_condition(cdroop::check_unstable(s.params, p));
    }
    if (const auto point = cdroop::select_operating_point(s.params, set)) {
        const double eps = s.analyses.epsilon.value_or(4.0);
        const auto cert = cdroop::check_full_order(s.params, *point, eps);
        std::printf("cascade conditions at scale %.3f (radius %.6f pu):\n", eps,
                    cert.region_radius_pu);
        print_condition(cert.tuning_feasible);
        print_condition(cert.droop_gain_small);
        print_condition(cert.voltage_loop_fast);
        print_condition(cert.current_loop_fast);
        print_condition(cert.overall);
    }
    std::printf("wrote %s\n", path.c_str());
    return kExitOk;
}

int cmd_list_presets() {
    for (const cdroop::Scenario& s : cdroop::preset_catalog())
        std::printf("%-16s %s\n", s.name.c_str(), s.description.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transient-stability toolkit for grid-forming converters "
                 "under complex droop control"};
    app.require_subcommand(1);

    std::string scenario_ref, out_dir;
    std::uint64_t seed = 0;
    double epsilon = 0.0;

    CLI::App* run = app.add_subcommand("run", "simulate a scenario and write reports");
    run->add_option("scenario", scenario_ref, "preset name or scenario JSON file")
        ->required();
    run->add_option("--out", out_dir, "output directory (default: <name>_out)");
    run->add_option("--seed", seed, "seed recorded in the analysis report");

    CLI::App* certify =
        app.add_subcommand("certify", "evaluate stability certificates only");
    certify->add_option("scenario", scenario_ref, "preset name or scenario JSON file")
        ->required();
    certify->add_option("--epsilon", epsilon, "region scale for the cascade bounds (> 3)");
    certify->add_option("--out", out_dir, "output directory (default: <name>_out)");

    CLI::App* list = app.add_subcommand("list-presets", "print the preset catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitScenario;
    }

    try {
        if (app.got_subcommand(run)) return cmd_run(scenario_ref, out_dir, seed);
        if (app.got_subcommand(certify)) return cmd_certify(scenario_ref, epsilon, out_dir);
        if (app.got_subcommand(list)) return cmd_list_presets();
    } catch (const cdroop::ScenarioError& e) {
        std::fprintf(stderr, "scenario error: %s\n", e.what());
        return kExitScenario;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitScenario;
}
