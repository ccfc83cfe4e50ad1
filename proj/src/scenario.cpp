#include "cdroop/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "json.hpp"

#include "cdroop/certify.hpp"
#include "cdroop/equilibrium.hpp"

namespace cdroop {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quantity(double value, const std::string& unit) {
    return fmt17(value) + " " + unit;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw ScenarioError(path + "." + item.key(), "unknown key");
    }
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ScenarioError(path + "." + key, "missing");
    return *it;
}

// A field value is either a unit-suffixed string or a bare number already in
// the canonical unit of its dimension.
double read_quantity(const json& v, const std::string& dimension, double omega0,
                     const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_quantity(v.get<std::string>(), dimension, omega0, path);
    throw ScenarioError(path, "expected a number or a '<value> <unit>' string");
}

void read_field_into(SystemParams& params, const std::string& field, const json& v,
                     const std::string& path) {
    const double value = read_quantity(v, field_dimension(field), params.omega0(), path);
    set_param_field(params, field, value);
}

void read_section(SystemParams& params, const json& obj, const std::string& path,
                  const std::map<std::string, std::string>& key_to_field) {
    for (const auto& item : obj.items()) {
        auto it = key_to_field.find(item.key());
        if (it == key_to_field.end())
            throw ScenarioError(path + "." + item.key(), "unknown key");
        read_field_into(params, it->second, item.value(), path + "." + item.key());
    }
}

const std::map<std::string, std::string>& base_keys() {
    static const std::map<std::string, std::string> m = {
        {"s_rated", "s_rated_va"}, {"v_rated", "v_rated_v"}, {"f_nominal", "f_nominal_hz"}};
    return m;
}

const std::map<std::string, std::string>& grid_keys() {
    static const std::map<std::string, std::string> m = {
        {"r_g", "r_g"}, {"l_g", "l_g"}, {"omega_g", "omega_g"}, {"v_g", "v_g"}};
    return m;
}

const std::map<std::string, std::string>& control_keys() {
    static const std::map<std::string, std::string> m = {
        {"eta", "eta"},       {"alpha", "alpha"},   {"phi", "phi"},
        {"p_star", "p_star"}, {"q_star", "q_star"}, {"v_star", "v_star"}};
    return m;
}

const std::map<std::string, std::string>& filter_keys() {
    static const std::map<std::string, std::string> m = {
        {"r_f", "r_f"},   {"l_f", "l_f"},   {"g_f", "g_f"},   {"c_f", "c_f"},
        {"k_pv", "k_pv"}, {"k_rv", "k_rv"}, {"k_pc", "k_pc"}, {"k_rc", "k_rc"}};
    return m;
}

ModelOrder order_from_int(int n, const std::string& path) {
    switch (n) {
        case 2: return ModelOrder::second;
        case 4: return ModelOrder::fourth;
        case 8: return ModelOrder::eighth;
        case 12: return ModelOrder::full;
    }
    throw ScenarioError(path, "model_order must be one of 2, 4, 8, 12");
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& dimension,
                      double omega0, const std::string& path) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw ScenarioError(path, "no number in '" + text + "'");
    std::string unit(end);
    const auto first = unit.find_first_not_of(' ');
    unit = first == std::string::npos ? std::string{} : unit.substr(first);
    const auto last = unit.find_last_not_of(' ');
    if (last != std::string::npos) unit = unit.substr(0, last + 1);
    if (unit.empty()) throw ScenarioError(path, "missing unit in '" + text + "'");

    if (dimension == "rad/s") {
        if (unit == "rad/s" || unit == "1/s") return value;
        if (unit == "omega0") return value * omega0;
    } else if (unit == dimension) {
        return value;
    }
    throw ScenarioError(path, "unit '" + unit + "' not valid here (expected " +
                                  dimension + ")");
}

std::string field_dimension(const std::string& field) {
    if (field == "eta") return "rad/s";
    if (field == "phi") return "rad";
    if (field == "s_rated_va") return "VA";
    if (field == "v_rated_v") return "V";
    if (field == "f_nominal_hz") return "Hz";
    return "pu";
}

Scenario scenario_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("(document)", e.what());
    }
    if (!root.is_object()) throw ScenarioError("(document)", "top level must be an object");
    check_keys(root,
               {"name", "description", "model_order", "frame", "base", "grid",
                "control", "filter", "initial_state", "events", "integrator",
                "analyses", "epsilon", "outputs"},
               "scenario");

    Scenario s;
    if (root.contains("name")) s.name = root["name"].get<std::string>();
    if (root.contains("description")) s.description = root["description"].get<std::string>();

    // Base first: the omega0-suffixed quantities elsewhere scale with it.
    if (root.contains("base")) read_section(s.params, root["base"], "base", base_keys());
    if (root.contains("grid")) read_section(s.params, root["grid"], "grid", grid_keys());
    if (root.contains("control"))
        read_section(s.params, root["control"], "control", control_keys());
    if (root.contains("filter"))
        read_section(s.params, root["filter"], "filter", filter_keys());
    try {
        s.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("scenario", e.what());
    }

    if (root.contains("model_order"))
        s.order = order_from_int(root["model_order"].get<int>(), "model_order");
    if (root.contains("frame")) {
        const std::string f = root["frame"].get<std::string>();
        if (f == "stationary")
            s.stationary_frame = true;
        else if (f != "synchronous")
            throw ScenarioError("frame", "must be 'synchronous' or 'stationary'");
    }

    if (root.contains("initial_state")) {
        const json& init = root["initial_state"];
        if (init.is_string()) {
            const std::string kind = init.get<std::string>();
            if (kind == "equilibrium")
                s.initial = InitialStateKind::equilibrium;
            else if (kind == "grid_voltage")
                s.initial = InitialStateKind::grid_voltage;
            else
                throw ScenarioError("initial_state",
                                    "must be 'equilibrium', 'grid_voltage', or an array");
        } else if (init.is_array()) {
            s.initial = InitialStateKind::explicit_values;
            for (const auto& v : init) s.initial_values.push_back(v.get<double>());
            if (s.initial_values.size() != static_cast<std::size_t>(dimension(s.order)))
                throw ScenarioError("initial_state",
                                    "needs " + std::to_string(dimension(s.order)) +
                                        " entries for this model order");
        } else {
            throw ScenarioError("initial_state", "must be a string or an array");
        }
    }

    if (root.contains("integrator")) {
        const json& ic = root["integrator"];
        check_keys(ic, {"method", "rtol", "atol", "fixed_step", "t_end", "output_dt",
                        "max_steps"},
                   "integrator");
        if (ic.contains("method")) {
            const std::string m = ic["method"].get<std::string>();
            if (m == "rk45")
                s.integrator.method = IntegratorConfig::Method::rk45;
            else if (m == "rk4")
                s.integrator.method = IntegratorConfig::Method::rk4;
            else
                throw ScenarioError("integrator.method", "must be 'rk45' or 'rk4'");
        }
        if (ic.contains("rtol")) s.integrator.rtol = ic["rtol"].get<double>();
        if (ic.contains("atol")) s.integrator.atol = ic["atol"].get<double>();
        if (ic.contains("fixed_step"))
            s.integrator.fixed_step = read_quantity(ic["fixed_step"], "s", s.params.omega0(),
                                                    "integrator.fixed_step");
        if (ic.contains("t_end"))
            s.integrator.t_end =
                read_quantity(ic["t_end"], "s", s.params.omega0(), "integrator.t_end");
        if (ic.contains("output_dt"))
            s.integrator.output_dt = read_quantity(ic["output_dt"], "s", s.params.omega0(),
                                                   "integrator.output_dt");
        if (ic.contains("max_steps"))
            s.integrator.max_steps = ic["max_steps"].get<std::int64_t>();
        if (!(s.integrator.t_end > 0.0))
            throw ScenarioError("integrator.t_end", "must be positive");
        if (!(s.integrator.output_dt > 0.0))
            throw ScenarioError("integrator.output_dt", "must be positive");
    }

    if (root.contains("events")) {
        const json& evs = root["events"];
        if (!evs.is_array()) throw ScenarioError("events", "must be an array");
        double prev_t = -1.0;
        std::size_t idx = 0;
        for (const auto& ev : evs) {
            const std::string path = "events[" + std::to_string(idx) + "]";
            check_keys(ev, {"t", "set", "value"}, path);
            Event e;
            e.t = read_quantity(require(ev, "t", path), "s", s.params.omega0(), path + ".t");
            e.field = require(ev, "set", path).get<std::string>();
            const auto& names = settable_param_fields();
            if (std::find(names.begin(), names.end(), e.field) == names.end())
                throw ScenarioError(path + ".set", "unknown parameter field '" + e.field + "'");
            e.value = read_quantity(require(ev, "value", path), field_dimension(e.field),
                                    s.params.omega0(), path + ".value");
            if (!(e.t > prev_t))
                throw ScenarioError(path + ".t", "event times must be strictly increasing");
            if (e.t < 0.0 || e.t > s.integrator.t_end)
                throw ScenarioError(path + ".t", "event time outside [0, t_end]");
            prev_t = e.t;
            s.events.push_back(e);
            ++idx;
        }
    }

    if (root.contains("analyses")) {
        const json& sel = root["analyses"];
        if (!sel.is_array()) throw ScenarioError("analyses", "must be an array of names");
        s.analyses = AnalysisSelection{};
        s.analyses.simulate = s.analyses.classify = s.analyses.certify2 = false;
        for (const auto& a : sel) {
            const std::string n = a.get<std::string>();
            if (n == "simulate")
                s.analyses.simulate = true;
            else if (n == "classify")
                s.analyses.classify = true;
            else if (n == "certify2")
                s.analyses.certify2 = true;
            else if (n == "certify_full")
                s.analyses.certify_full = true;
            else if (n == "boundary_sweep")
                s.analyses.boundary_sweep = true;
            else if (n == "phase_portrait")
                s.analyses.phase_portrait = true;
            else
                throw ScenarioError("analyses", "unknown analysis '" + n + "'");
        }
    }
    if (root.contains("epsilon")) {
        s.analyses.epsilon = root["epsilon"].get<double>();
        if (!(*s.analyses.epsilon > 3.0))
            throw ScenarioError("epsilon", "the scale separation must exceed 3");
    }

    if (root.contains("outputs")) {
        const json& out = root["outputs"];
        check_keys(out, {"trajectory_csv", "certificates_json", "analysis_json"}, "outputs");
        if (out.contains("trajectory_csv"))
            s.outputs.trajectory_csv = out["trajectory_csv"].get<std::string>();
        if (out.contains("certificates_json"))
            s.outputs.certificates_json = out["certificates_json"].get<std::string>();
        if (out.contains("analysis_json"))
            s.outputs.analysis_json = out["analysis_json"].get<std::string>();
    }

    if (s.analyses.classify && !s.analyses.simulate)
        throw ScenarioError("analyses", "classify needs simulate");
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json root;
    root["name"] = s.name;
    root["description"] = s.description;
    root["model_order"] = static_cast<int>(s.order);
    root["frame"] = s.stationary_frame ? "stationary" : "synchronous";
    root["base"] = {{"s_rated", quantity(s.params.base.s_rated_va, "VA")},
                    {"v_rated", quantity(s.params.base.v_rated_v, "V")},
                    {"f_nominal", quantity(s.params.base.f_nominal_hz, "Hz")}};
    root["grid"] = {{"r_g", quantity(s.params.grid.r_g, "pu")},
                    {"l_g", quantity(s.params.grid.l_g, "pu")},
                    {"omega_g", quantity(s.params.grid.omega_g, "pu")},
                    {"v_g", quantity(s.params.grid.v_g, "pu")}};
    root["control"] = {{"eta", quantity(s.params.ctrl.eta, "rad/s")},
                       {"alpha", quantity(s.params.ctrl.alpha, "pu")},
                       {"phi", quantity(s.params.ctrl.phi, "rad")},
                       {"p_star", quantity(s.params.ctrl.p_star, "pu")},
                       {"q_star", quantity(s.params.ctrl.q_star, "pu")},
                       {"v_star", quantity(s.params.ctrl.v_star, "pu")}};
    root["filter"] = {{"r_f", quantity(s.params.filter.r_f, "pu")},
                      {"l_f", quantity(s.params.filter.l_f, "pu")},
                      {"g_f", quantity(s.params.filter.g_f, "pu")},
                      {"c_f", quantity(s.params.filter.c_f, "pu")},
                      {"k_pv", quantity(s.params.filter.k_pv, "pu")},
                      {"k_rv", quantity(s.params.filter.k_rv, "pu")},
                      {"k_pc", quantity(s.params.filter.k_pc, "pu")},
                      {"k_rc", quantity(s.params.filter.k_rc, "pu")}};

    switch (s.initial) {
        case InitialStateKind::equilibrium: root["initial_state"] = "equilibrium"; break;
        case InitialStateKind::grid_voltage: root["initial_state"] = "grid_voltage"; break;
        case InitialStateKind::explicit_values: root["initial_state"] = s.initial_values; break;
    }

    json evs = json::array();
    for (const Event& e : s.events)
        evs.push_back({{"t", quantity(e.t, "s")},
                       {"set", e.field},
                       {"value", quantity(e.value, field_dimension(e.field))}});
    root["events"] = evs;

    root["integrator"] = {
        {"method", s.integrator.method == IntegratorConfig::Method::rk45 ? "rk45" : "rk4"},
        {"rtol", s.integrator.rtol},
        {"atol", s.integrator.atol},
        {"fixed_step", quantity(s.integrator.fixed_step, "s")},
        {"t_end", quantity(s.integrator.t_end, "s")},
        {"output_dt", quantity(s.integrator.output_dt, "s")},
        {"max_steps", s.integrator.max_steps}};

    json sel = json::array();
    if (s.analyses.simulate) sel.push_back("simulate");
    if (s.analyses.classify) sel.push_back("classify");
    if (s.analyses.certify2) sel.push_back("certify2");
    if (s.analyses.certify_full) sel.push_back("certify_full");
    if (s.analyses.boundary_sweep) sel.push_back("boundary_sweep");
    if (s.analyses.phase_portrait) sel.push_back("phase_portrait");
    root["analyses"] = sel;
    if (s.analyses.epsilon) root["epsilon"] = *s.analyses.epsilon;

    root["outputs"] = {{"trajectory_csv", s.outputs.trajectory_csv},
                       {"certificates_json", s.outputs.certificates_json},
                       {"analysis_json", s.outputs.analysis_json}};
    return root.dump(2) + "\n";
}

std::vector<double> initial_state(const Scenario& s) {
    const std::size_t dim = dimension(s.order);
    switch (s.initial) {
        case InitialStateKind::explicit_values: return s.initial_values;
        case InitialStateKind::equilibrium: {
            if (s.stationary_frame) return std::vector<double>(dim, 0.0);
            const auto point = select_operating_point(s.params, equilibria(s.params));
            if (!point)
                throw ScenarioError("initial_state",
                                    "no steady state exists for these parameters");
            return embed_equilibrium(s.params, *point, s.order);
        }
        case InitialStateKind::grid_voltage: break;
    }
    // Plant at rest at the grid voltage: zero branch current, matching filter
    // state, integrators empty.
    std::vector<double> x(dim, 0.0);
    const Vec2 v{s.params.grid.v_g, 0.0};
    x[kVhat] = v.d;
    x[kVhat + 1] = v.q;
    if (dim > kCurrent) {
        const Vec2 i = s.params.y_mat() * (v - s.params.v_g_vec());
        x[kCurrent] = i.d;
        x[kCurrent + 1] = i.q;
        if (dim > kCapVoltage) {
            x[kCapVoltage] = v.d;
            x[kCapVoltage + 1] = v.q;
            if (dim > kFilterCurrent) {
                const Vec2 i_f = s.params.y_f_mat() * v + i;
                x[kFilterCurrent] = i_f.d;
                x[kFilterCurrent + 1] = i_f.q;
            }
        }
    }
    return x;
}

namespace {

SystemParams strong_grid_params(double eta_pu) {
    SystemParams p;
    p.ctrl.phi = std::atan(2.5);
    p.ctrl.p_star = 0.5;
    p.ctrl.q_star = 0.2;
    p.ctrl.v_star = 1.0;
    p.ctrl.alpha = 1.0;
    p.ctrl.eta = eta_pu * p.omega0();
    return p;
}

SystemParams resistive_grid_params(double alpha) {
    SystemParams p;
    p.grid.r_g = 0.8;
    p.grid.l_g = 0.8;
    p.ctrl.phi = std::acos(-1.0) / 4.0;
    p.ctrl.p_star = 0.8;
    p.ctrl.q_star = -0.2;
    p.ctrl.v_star = 1.0;
    p.ctrl.alpha = alpha;
    p.ctrl.eta = 0.08 * p.omega0();
    return p;
}

Scenario make_preset(const char* name, const char* description) {
    Scenario s;
    s.name = name;
    s.description = description;
    return s;
}

std::vector<Scenario> build_presets() {
    std::vector<Scenario> v;

    {
        Scenario s = make_preset(
            "caseI_slow",
            "Full converter model riding through a 50% grid-voltage dip at a slow "
            "droop gain; every control layer settles back to the new steady state.");
        s.params = strong_grid_params(0.02);
        s.order = ModelOrder::full;
        s.events = {{0.5, "v_g", 0.5}};
        s.integrator.t_end = 3.5;
        s.analyses.certify_full = true;
        v.push_back(s);
    }
    {
        Scenario s = make_preset(
            "caseI_fast",
            "The same dip with a three-times-faster droop gain; the converter "
            "still settles, but the droop layer no longer separates from the "
            "grid current and the settling hierarchy inverts.");
        s.params = strong_grid_params(0.06);
        s.order = ModelOrder::full;
        s.events = {{0.5, "v_g", 0.5}};
        s.integrator.t_end = 3.5;
        s.analyses.certify_full = true;
        v.push_back(s);
    }
    {
        Scenario s = make_preset(
            "caseII_boundary",
            "Dip response a hair below the critical droop gain on the reduced "
            "model, plus the gain sweep locating the stability boundary itself.");
        s.params = strong_grid_params(0.099);
        s.order = ModelOrder::fourth;
        s.events = {{0.5, "v_g", 0.5}};
        s.integrator.t_end = 20.0;
        s.analyses.boundary_sweep = true;
        v.push_back(s);
    }
    {
        Scenario s = make_preset(
            "caseIII_cycle",
            "Resistive weak grid with strong amplitude regulation: after the dip "
            "the lone steady state repels and trajectories settle on a limit cycle.");
        s.params = resistive_grid_params(3.0);
        s.order = ModelOrder::second;
        s.events = {{0.5, "v_g", 0.5}};
        s.integrator.t_end = 10.0;
        s.analyses.phase_portrait = true;
        v.push_back(s);
    }
    {
        Scenario s = make_preset(
            "caseIII_stable",
            "The same resistive weak grid with unit amplitude regulation; the "
            "post-dip steady state attracts everything.");
        s.params = resistive_grid_params(1.0);
        s.order = ModelOrder::second;
        s.events = {{0.5, "v_g", 0.5}};
        s.integrator.t_end = 10.0;
        s.analyses.phase_portrait = true;
        v.push_back(s);
    }
    {
        Scenario s = make_preset(
            "example3",
            "Zero-setpoint operation against a weak low-voltage grid where "
            "classical droop has no steady state but complex droop does.");
        SystemParams p;
        p.grid.r_g = 0.4;
        p.grid.l_g = 0.4;
        p.grid.v_g = 0.1;
        p.ctrl.phi = std::acos(-1.0) / 2.0;
        p.ctrl.p_star = 0.0;
        p.ctrl.q_star = 0.0;
        p.ctrl.v_star = 1.0;
        p.ctrl.alpha = 1.0;
        p.ctrl.eta = 0.08 * p.omega0();
        s.params = p;
        s.order = ModelOrder::second;
        s.initial = InitialStateKind::grid_voltage;
        s.integrator.t_end = 5.0;
        v.push_back(s);
    }
    {
        Scenario s = make_preset(
            "example4_roa",
            "Post-dip operating point of the slow strong-grid case, used to size "
            "the certified region of attraction and the admissible scale range.");
        s.params = strong_grid_params(0.02);
        s.params.grid.v_g = 0.5;
        s.order = ModelOrder::full;
        s.integrator.t_end = 1.0;
        s.analyses.certify_full = true;
        v.push_back(s);
    }
    {
        Scenario s = make_preset(
            "offgrid_hopf",
            "Islanded oscillator with doubled amplitude gain: the origin repels "
            "and the voltage settles on a circular limit cycle at line frequency.");
        SystemParams p;
        p.grid.r_g = 0.0;
        p.grid.l_g = 1.0;
        p.grid.v_g = 0.0;
        p.ctrl.phi = std::acos(-1.0) / 2.0;
        p.ctrl.p_star = 0.0;
        p.ctrl.q_star = 0.0;
        p.ctrl.v_star = 1.0;
        p.ctrl.alpha = 2.0;
        p.ctrl.eta = 0.08 * p.omega0();
        s.params = p;
        s.order = ModelOrder::second;
        s.stationary_frame = true;
        s.initial = InitialStateKind::explicit_values;
        s.initial_values = {1.2, 0.0};
        s.integrator.t_end = 5.0;
        s.integrator.output_dt = 5e-5;
        v.push_back(s);
    }
    return v;
}

}  // namespace

const std::vector<Scenario>& preset_catalog() {
    static const std::vector<Scenario> catalog = build_presets();
    return catalog;
}

const Scenario* find_preset(const std::string& name) {
    for (const Scenario& s : preset_catalog())
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace cdroop
