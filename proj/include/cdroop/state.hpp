#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace cdroop {

// Model fidelity, named by the number of real states.
// The state layout is frozen; higher orders append blocks, so a lower-order
// state is always a prefix of the next one:
//   order  2: [vhat]                          controlled oscillator voltage
//   order  4: [vhat, i]                       + grid-side current
//   order  8: [vhat, i, v, zeta_v]            + filter cap voltage, voltage-loop state
//   order 12: [vhat, i, v, zeta_v, i_f, zeta_c] + filter inductor current, current-loop state
// Each block holds (d, q) components in the synchronous frame.
enum class ModelOrder : int {
    second = 2,
    fourth = 4,
    eighth = 8,
    full = 12,
};

inline int dimension(ModelOrder order) { return static_cast<int>(order); }

// Canonical component names, used for CSV headers and diagnostics.
inline const std::vector<std::string>& state_component_names(ModelOrder order) {
    static const std::vector<std::string> all = {
        "vhat_d", "vhat_q", "i_d", "i_q", "v_d", "v_q",
        "zeta_v_d", "zeta_v_q", "i_f_d", "i_f_q", "zeta_c_d", "zeta_c_q"};
    static const std::vector<std::string> n2(all.begin(), all.begin() + 2);
    static const std::vector<std::string> n4(all.begin(), all.begin() + 4);
    static const std::vector<std::string> n8(all.begin(), all.begin() + 8);
    switch (order) {
        case ModelOrder::second: return n2;
        case ModelOrder::fourth: return n4;
        case ModelOrder::eighth: return n8;
        case ModelOrder::full: return all;
    }
    return all;
}

// Block offsets within the state vector.
inline constexpr std::size_t kVhat = 0;
inline constexpr std::size_t kCurrent = 2;
inline constexpr std::size_t kCapVoltage = 4;
inline constexpr std::size_t kZetaV = 6;
inline constexpr std::size_t kFilterCurrent = 8;
inline constexpr std::size_t kZetaC = 10;

using State12 = std::array<double, 12>;

// Polar-view signals of a voltage trajectory sample: magnitude, angle and
// the two components (rate of amplitude change, frequency) of the complex
// frequency.
struct PolarSignals {
    double v = 0.0;      // magnitude, pu
    double delta = 0.0;  // angle relative to the frame, rad
    double eps = 0.0;    // normalized magnitude rate, 1/s
    double omega = 0.0;  // instantaneous frequency, rad/s (absolute)
};

}  // namespace cdroop
