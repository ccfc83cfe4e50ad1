#pragma once

#include <vector>

#include "cdroop/classify.hpp"
#include "cdroop/integrate.hpp"
#include "cdroop/params.hpp"

namespace cdroop {

// Serial runs the plain loop kept as the reference implementation; parallel
// distributes independent simulations over OpenMP threads. Both produce
// bit-identical results (cells are merged by index, probe ladders are
// fixed), so serial exists for testing and as the fallback without OpenMP.
enum class RunPolicy { serial, parallel };

// ---------------------------------------------------------------------------
// Droop-gain stability boundary under a permanent grid-voltage dip.
// ---------------------------------------------------------------------------

struct BoundarySweepConfig {
    double eta_lo_pu = 0.005;  // bracket, multiples of omega0
    double eta_hi_pu = 0.5;
    double tol_pu = 1e-3;      // bracket width target, multiples of omega0
    double dip_value = 0.5;    // grid voltage during the event, pu
    double dip_time = 0.5;     // s
    ModelOrder order = ModelOrder::fourth;
    // Decision horizon: five seconds after the dip. Settling slower than
    // that counts against the gain, so the estimate is a hair conservative
    // near the true threshold.
    IntegratorConfig integrator{.t_end = 5.5, .output_dt = 1e-3};
    ClassifyConfig classifier{};
};

struct BoundaryResult {
    // Simulation-based estimate: each probe starts at the pre-dip operating
    // point, rides through the dip, and must classify as Converged.
    double eta_empirical = 0.0;  // rad/s
    bool bracket_valid = false;  // low end converged, high end did not

    // Certificate-based bound at the post-dip parameters (slow-level cascade
    // condition at the degenerate region scale), solved by fixed point.
    double eta_analytic = 0.0;  // rad/s, 0 when infeasible
    bool analytic_feasible = false;

    std::int64_t simulations = 0;
};

BoundaryResult stability_boundary(const SystemParams& base,
                                  const BoundarySweepConfig& cfg = {},
                                  RunPolicy policy = RunPolicy::parallel);

// The certificate half of stability_boundary, exposed on its own. The
// equilibrium depends on the gain only through the frequency offset, so at
// nominal grid frequency the iteration converges immediately.
double analytic_gain_bound(const SystemParams& params, bool* feasible = nullptr);

// Boundary traced over a grid of amplitude-regulation gains, one
// stability_boundary column per grid point.
enum class BoundaryMode { analytic, empirical, both };

struct BoundaryCurve {
    std::vector<double> alpha;          // pu, as supplied
    std::vector<double> eta_analytic;   // rad/s, 0 where invalid
    std::vector<double> eta_empirical;  // rad/s, 0 where invalid
    std::vector<char> analytic_valid;   // per-point flags
    std::vector<char> empirical_valid;
    ModelOrder order = ModelOrder::fourth;
};

BoundaryCurve boundary_curve(const SystemParams& base,
                             const std::vector<double>& alpha_grid,
                             const BoundarySweepConfig& cfg = {},
                             BoundaryMode mode = BoundaryMode::both,
                             RunPolicy policy = RunPolicy::parallel);

// ---------------------------------------------------------------------------
// Phase portrait: classify a grid of initial oscillator voltages.
// ---------------------------------------------------------------------------

struct PhasePortraitConfig {
    int grid_n = 20;                 // cells per axis
    double lo = -1.5, hi = 1.5;      // grid range on both axes, pu
    double exclusion_radius = 0.05;  // skip starts this close to a steady state, pu
    int path_samples = 200;          // decimated track length kept per cell
    IntegratorConfig integrator{.t_end = 20.0, .output_dt = 1e-3};
    ClassifyConfig classifier{};
};

struct PortraitCell {
    Vec2 start;
    bool skipped = false;  // inside an exclusion ball
    ClassifyResult result;
    std::vector<Vec2> path;  // decimated oscillator-voltage track, for plotting
    // Largest excursion above the voltage bound after the trajectory first
    // enters it (0 when the bound is never entered or never exceeded again).
    double bound_violation = 0.0;
};

struct PhasePortrait {
    std::vector<PortraitCell> cells;  // row-major, index = iy * grid_n + ix
    int grid_n = 0;
    int converged = 0, limit_cycles = 0, diverged = 0, undecided = 0, skipped = 0;
};

PhasePortrait phase_portrait(const SystemParams& params,
                             const PhasePortraitConfig& cfg = {},
                             RunPolicy policy = RunPolicy::parallel);

}  // namespace cdroop
