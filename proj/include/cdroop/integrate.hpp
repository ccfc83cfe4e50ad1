#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdroop/dynamics.hpp"
#include "cdroop/params.hpp"
#include "cdroop/state.hpp"

namespace cdroop {

struct IntegratorConfig {
    enum class Method { rk45, rk4 };
    Method method = Method::rk45;
    double rtol = 1e-8;        // rk45 relative tolerance
    double atol = 1e-10;       // rk45 absolute tolerance
    double fixed_step = 1e-6;  // rk4 step, s
    double t_end = 1.0;        // s
    double output_dt = 1e-3;   // sample spacing, s
    std::int64_t max_steps = 500'000'000;  // hard stop against runaway runs
};

// A mid-run parameter change: at time t, the named field is set to value
// and integration continues with the state unchanged. No integration step
// straddles an event time.
struct Event {
    double t = 0.0;
    std::string field;
    double value = 0.0;
};

// Parameter set in force from t_start onward.
struct SegmentInfo {
    double t_start = 0.0;
    SystemParams params;
};

struct IntegrationStats {
    std::int64_t steps = 0;
    std::int64_t rejected = 0;
    std::int64_t rhs_evals = 0;
    bool step_limit_hit = false;
};

struct Trajectory {
    ModelOrder order = ModelOrder::second;
    bool stationary_frame = false;
    std::vector<double> t;            // sample times, s
    std::vector<double> x;            // row-major, dim() values per sample
    std::vector<SegmentInfo> segments;
    std::vector<Event> events;        // the applied schedule, sorted by time
    bool diverged = false;            // non-finite state, blow-up, or step collapse
    double diverged_at = 0.0;         // time of the divergence flag, s
    IntegrationStats stats;

    int dim() const { return dimension(order); }
    std::size_t samples() const { return t.size(); }
    const double* sample(std::size_t i) const { return x.data() + i * dim(); }

    // Parameters in force at time ts (the segment containing ts).
    const SystemParams& params_at(double ts) const;
};

// Integrates the model of the given order from x0 (size = dimension(order))
// over [0, t_end], sampling on the uniform output grid (t_end is always the
// final sample). Events are applied in time order; events at t <= 0 modify
// the initial parameter set, events beyond t_end are ignored.
Trajectory integrate(const SystemParams& params, ModelOrder order,
                     const std::vector<double>& x0, const IntegratorConfig& config,
                     const std::vector<Event>& events = {},
                     bool stationary_frame = false);

}  // namespace cdroop
