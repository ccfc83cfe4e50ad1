#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdroop/integrate.hpp"
#include "cdroop/params.hpp"
#include "cdroop/state.hpp"

namespace cdroop {

// Scenario file problem (missing key, bad unit, inconsistent value); the
// message always starts with the offending field path.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message) {}
};

enum class InitialStateKind { equilibrium, grid_voltage, explicit_values };

// Which result blocks a run should produce.
struct AnalysisSelection {
    bool simulate = true;
    bool classify = true;
    bool certify2 = true;       // steady-state and oscillator-level certificates
    bool certify_full = false;  // nested-loop conditions and the epsilon scan
    bool boundary_sweep = false;
    bool phase_portrait = false;
    std::optional<double> epsilon;  // fixed scale for certify_full; unset = scan
};

// Output file names, resolved relative to the chosen output directory.
struct OutputNames {
    std::string trajectory_csv = "trajectory.csv";
    std::string certificates_json = "certificates.json";
    std::string analysis_json = "analysis.json";
};

struct Scenario {
    std::string name;
    std::string description;
    SystemParams params;
    ModelOrder order = ModelOrder::second;
    bool stationary_frame = false;
    InitialStateKind initial = InitialStateKind::equilibrium;
    std::vector<double> initial_values;  // used when initial == explicit_values
    std::vector<Event> events;
    IntegratorConfig integrator;
    AnalysisSelection analyses;
    OutputNames outputs;
};

// Quantity strings pair a number with an explicit unit ("0.08 pu",
// "0.02 omega0", "3.5 s") so seconds and radians can never be confused.
// dimension selects the accepted units: pu | rad | s | Hz | V | VA | rad/s
// (rad/s also accepts 1/s and omega0, the latter scaled by the system base).
double parse_quantity(const std::string& text, const std::string& dimension,
                      double omega0, const std::string& path);

// Expected dimension of each settable parameter field.
std::string field_dimension(const std::string& field);

// JSON text <-> Scenario. Serializing and re-parsing reproduces the exact
// same structure; unknown keys, bad units, or inconsistent values throw
// ScenarioError naming the field.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);

// Initial state vector for the scenario's model order.
std::vector<double> initial_state(const Scenario& s);

// Built-in scenarios covering the documented study cases.
const std::vector<Scenario>& preset_catalog();
const Scenario* find_preset(const std::string& name);

}  // namespace cdroop
