#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdroop/mat2.hpp"

namespace cdroop {

// Ratings that anchor the per-unit system. All electrical quantities
// elsewhere are expressed in per unit on this base; time stays in seconds.
struct PerUnitBase {
    double s_rated_va = 2.0e6;   // three-phase apparent power rating
    double v_rated_v = 690.0;    // line-to-line voltage rating
    double f_nominal_hz = 50.0;  // nominal frequency

    double omega0() const { return 2.0 * std::numbers::pi * f_nominal_hz; }
};

// Grid interconnection: series impedance and the stiff source behind it.
// l_g holds the per-unit reactance at nominal frequency; divide by omega0
// when it acts as a time constant (seconds per radian).
struct GridLink {
    double r_g = 0.08;    // series resistance, pu
    double l_g = 0.2;     // series reactance at nominal frequency, pu
    double omega_g = 1.0; // grid frequency, pu of omega0
    double v_g = 1.0;     // grid voltage magnitude, pu
};

// Converter control: the complex-droop (dispatchable virtual oscillator)
// gains and setpoints.
struct ControllerParams {
    double eta = 0.0;     // droop gain, rad/s (enter pu gains as x*omega0)
    double alpha = 1.0;   // amplitude-regulation gain, pu
    double phi = 0.0;     // rotation angle of the droop law, rad
    double p_star = 0.0;  // active power setpoint, pu
    double q_star = 0.0;  // reactive power setpoint, pu
    double v_star = 1.0;  // voltage magnitude setpoint, pu
};

// Output filter and the cascaded vector voltage/current loops.
// l_f and c_f are per-unit reactance/susceptance at nominal frequency.
struct FilterAndLoops {
    double r_f = 0.05 / 30.0;  // filter series resistance, pu
    double l_f = 0.05;         // filter series reactance, pu
    double g_f = 0.05 / 30.0;  // filter shunt conductance, pu
    double c_f = 0.05;         // filter shunt susceptance, pu
    double k_pv = 1.0;         // voltage loop proportional gain, pu
    double k_rv = 10.0;        // voltage loop resonant gain, pu/s
    double k_pc = 2.0;         // current loop proportional gain, pu
    double k_rc = 20.0;        // current loop resonant gain, pu/s
};

struct SystemParams {
    PerUnitBase base;
    GridLink grid;
    ControllerParams ctrl;
    FilterAndLoops filter;

    double omega0() const { return base.omega0(); }

    // Frame mismatch between nominal and grid frequency, rad/s.
    double omega_delta() const { return omega0() * (1.0 - grid.omega_g); }

    // Grid impedance as seen in the synchronous frame, pu.
    std::complex<double> z() const {
        return {grid.r_g, grid.omega_g * grid.l_g};
    }
    std::complex<double> y() const { return 1.0 / z(); }

    Mat2 z_mat() const { return Mat2::embed(z()); }
    Mat2 y_mat() const { return Mat2::embed(y()); }

    // Filter shunt admittance matrix (conductance + susceptance), pu.
    std::complex<double> y_f() const {
        return {filter.g_f, grid.omega_g * filter.c_f};
    }
    Mat2 y_f_mat() const { return Mat2::embed(y_f()); }

    // Electrical storage elements as time constants, seconds.
    double l_g_seconds() const { return grid.l_g / omega0(); }
    double l_f_seconds() const { return filter.l_f / omega0(); }
    double c_f_seconds() const { return filter.c_f / omega0(); }

    // Conjugated normalized power setpoint (p* - jq*)/v*^2.
    std::complex<double> sigma_star() const {
        return std::complex<double>(ctrl.p_star, -ctrl.q_star) /
               (ctrl.v_star * ctrl.v_star);
    }

    // Rotated setpoint e^{j phi} sigma_star; its real/imag parts drive the
    // amplitude/angle channels of the droop law.
    std::complex<double> rotated_sigma_star() const {
        return std::polar(1.0, ctrl.phi) * sigma_star();
    }
    Mat2 s_phi_star_mat() const { return Mat2::embed(rotated_sigma_star()); }

    Mat2 r_phi_mat() const { return Mat2::rotation(ctrl.phi); }
    // Rotated admittance R_phi * Y, the embedding of e^{j phi} y.
    Mat2 y_phi_mat() const { return Mat2::embed(std::polar(1.0, ctrl.phi) * y()); }

    // Grid voltage phasor, aligned with the d axis of the grid frame.
    Vec2 v_g_vec() const { return {grid.v_g, 0.0}; }

    // Rotated grid-impedance angle: angle(z) - phi.
    double phi_tilde() const { return std::arg(z()) - ctrl.phi; }

    void validate() const;
};

// Assigns one scalar parameter addressed by its field name (e.g. "v_g",
// "eta", "k_pv"); used by mid-run events and scenario files. Throws
// std::invalid_argument for unknown names.
void set_param_field(SystemParams& params, const std::string& name, double value);

// Names accepted by set_param_field.
const std::vector<std::string>& settable_param_fields();

// Throws std::invalid_argument naming the offending field.
inline void SystemParams::validate() const {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("SystemParams: " + what);
    };
    if (!(base.s_rated_va > 0.0)) fail("s_rated_va must be > 0");
    if (!(base.v_rated_v > 0.0)) fail("v_rated_v must be > 0");
    if (!(base.f_nominal_hz > 0.0)) fail("f_nominal_hz must be > 0");
    if (!(grid.r_g >= 0.0)) fail("r_g must be >= 0");
    if (!(grid.l_g >= 0.0)) fail("l_g must be >= 0");
    if (!(std::abs(z()) > 0.0)) fail("grid impedance magnitude must be > 0");
    if (!(grid.omega_g > 0.0)) fail("omega_g must be > 0");
    if (!(grid.v_g >= 0.0)) fail("v_g must be >= 0");
    if (!(ctrl.eta > 0.0)) fail("eta must be > 0");
    if (!(ctrl.alpha >= 0.0)) fail("alpha must be >= 0");
    if (!(ctrl.phi >= 0.0 && ctrl.phi <= std::numbers::pi / 2.0 + 1e-12))
        fail("phi must lie in [0, pi/2]");
    if (!(ctrl.v_star > 0.0)) fail("v_star must be > 0");
    if (!(filter.r_f >= 0.0)) fail("r_f must be >= 0");
    if (!(filter.g_f >= 0.0)) fail("g_f must be >= 0");
    if (!(filter.l_f > 0.0)) fail("l_f must be > 0");
    if (!(filter.c_f > 0.0)) fail("c_f must be > 0");
    if (!(filter.k_pv > 0.0)) fail("k_pv must be > 0");
    if (!(filter.k_rv > 0.0)) fail("k_rv must be > 0");
    if (!(filter.k_pc > 0.0)) fail("k_pc must be > 0");
    if (!(filter.k_rc > 0.0)) fail("k_rc must be > 0");
}

}  // namespace cdroop
