#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cdroop/classify.hpp"
#include "cdroop/integrate.hpp"
#include "cdroop/scenario.hpp"
#include "cdroop/sweep.hpp"

namespace cdroop {

// Everything one scenario run can produce, gathered for the report writers.
// Optional members stay empty when the scenario did not select the
// corresponding analysis.
struct RunArtifacts {
    Scenario scenario;
    std::optional<Trajectory> trajectory;
    std::optional<ClassifyResult> classification;
    std::optional<BoundaryResult> boundary;
    std::optional<PhasePortrait> portrait;
    std::uint64_t seed = 0;  // recorded for reproducibility of callers' sampling
};

// Samples with the derived droop-law signals appended:
//   t, <state components>, p, q, v, omega, eps
// All values %.17g, one row per output sample; derived columns follow the
// parameter segment each sample falls in.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Machine-readable certificate report for the scenario's parameter set:
// parameter-only conditions, the steady-state set with per-point tests,
// and (when the scenario selects the full-model certificate) the nested-loop
// cascade conditions and the admissible region-scale range. Serialized JSON.
std::string certificates_report(const Scenario& s);

// Machine-readable run summary: settling outcome, voltage bound, islanded
// prediction (stationary frame only), boundary sweep and phase portrait
// summaries, applied events, integrator statistics. Serialized JSON.
std::string analysis_report(const RunArtifacts& run);

// Writes text to path, throwing std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cdroop
