#pragma once

#include <string>

#include "cdroop/equilibrium.hpp"
#include "cdroop/integrate.hpp"

namespace cdroop {

struct ClassifyConfig {
    double converge_tol = 1e-4;       // pu, terminal distance to an equilibrium
    double transient_discard = 0.4;   // leading fraction ignored by cycle detection
    double terminal_window = 0.2;     // trailing fraction for the convergence test
    double centroid_window = 0.5;     // trailing fraction for the cycle centroid
    int min_crossings = 4;            // section hits needed to call a cycle
    double radius_spread_tol = 1e-3;  // pu, max-min crossing radius
    double period_spread_tol = 0.01;  // relative, max-min over mean return time
    double divergence_factor = 10.0;  // times the voltage bound
};

enum class Outcome { converged, limit_cycle, diverged, undecided };

const char* outcome_name(Outcome o);

struct ClassifyResult {
    Outcome outcome = Outcome::undecided;
    int equilibrium_index = -1;   // winning steady state (converged only)
    double distance = 0.0;        // terminal max distance to it, pu
    double cycle_radius = 0.0;    // mean section radius, pu (limit_cycle only)
    double cycle_period = 0.0;    // mean return time, s (limit_cycle only)
    std::string detail;
};

// Classifies the tail of a trajectory against the steady states of its
// final parameter set: settled onto an equilibrium (for the islanded model,
// the origin), locked onto a periodic orbit (detected on a Poincare section
// through the orbit centroid), diverged (integrator flag, or oscillator
// magnitude far beyond the voltage bound when amplitude regulation is
// active), or undecided.
ClassifyResult classify(const Trajectory& traj, const ClassifyConfig& cfg = {});

}  // namespace cdroop
