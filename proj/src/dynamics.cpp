#include "cdroop/dynamics.hpp"

#include <cmath>

namespace cdroop {

NormalizedPower normalized_power(const Vec2& v, const Vec2& i) {
    const double n2 = v.norm2();
    const double p = v.d * i.d + v.q * i.q;
    const double q = v.q * i.d - v.d * i.q;
    return {p / n2, q / n2};
}

RotatedPower rotated_power(double p, double q, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    // e^{j(pi/2 - phi)} (p + jq): cos(pi/2-phi) = sin(phi), sin(pi/2-phi) = cos(phi).
    return {p * s - q * c, p * c + q * s};
}

CompiledModel::CompiledModel(const SystemParams& params, ModelOrder order,
                             bool stationary_frame)
    : params_(params), order_(order), stationary_frame_(stationary_frame) {
    params.validate();
    eta_ = params.ctrl.eta;
    vstar2_ = params.ctrl.v_star * params.ctrl.v_star;
    alpha_over_vstar2_ = params.ctrl.alpha / vstar2_;
    s_phi_star_ = params.s_phi_star_mat();
    r_phi_ = params.r_phi_mat();
    y_phi_ = params.y_phi_mat();
    y_ = params.y_mat();
    z_ = params.z_mat();
    y_f_ = params.y_f_mat();
    omega_delta_ = params.omega_delta();
    if (stationary_frame_) {
        // Islanded model: no grid source, oscillator block rotates at omega0.
        v_g_ = Vec2{0.0, 0.0};
        frame_j_rate_ = params.omega0();
    } else {
        v_g_ = params.v_g_vec();
        frame_j_rate_ = omega_delta_;
    }
    inv_lg_ = 1.0 / params.l_g_seconds();
    inv_cf_ = 1.0 / params.c_f_seconds();
    inv_lf_ = 1.0 / params.l_f_seconds();
    k_pv_ = params.filter.k_pv;
    k_rv_ = params.filter.k_rv;
    k_pc_ = params.filter.k_pc;
    k_rc_ = params.filter.k_rc;
}

double CompiledModel::frame_rate() const {
    return stationary_frame_ ? 0.0 : params_.grid.omega_g * params_.omega0();
}

void CompiledModel::rhs(const double* x, double* dxdt) const {
    const Vec2 vhat{x[kVhat], x[kVhat + 1]};

    // Oscillator block. For the second-order model the droop acts on the
    // statically resolved grid current; for higher orders on the current state.
    Vec2 droop_current;
    if (order_ == ModelOrder::second) {
        droop_current = y_ * (vhat - v_g_);
    } else {
        droop_current = Vec2{x[kCurrent], x[kCurrent + 1]};
    }
    const double phi_v = (vstar2_ - vhat.norm2()) / vstar2_;
    Vec2 dvhat = eta_ * (s_phi_star_ * vhat - r_phi_ * droop_current) +
                 (eta_ * params_.ctrl.alpha * phi_v) * vhat;
    dvhat += frame_j_rate_ * Vec2{-vhat.q, vhat.d};
    dxdt[kVhat] = dvhat.d;
    dxdt[kVhat + 1] = dvhat.q;
    if (order_ == ModelOrder::second) return;

    const Vec2 i{x[kCurrent], x[kCurrent + 1]};
    // Voltage seen by the grid branch: the cap voltage when modeled,
    // otherwise the oscillator output directly.
    const Vec2 v_branch = (order_ == ModelOrder::fourth)
                              ? vhat
                              : Vec2{x[kCapVoltage], x[kCapVoltage + 1]};
    const Vec2 di = inv_lg_ * (v_branch - v_g_ - z_ * i);
    dxdt[kCurrent] = di.d;
    dxdt[kCurrent + 1] = di.q;
    if (order_ == ModelOrder::fourth) return;

    const Vec2 v{x[kCapVoltage], x[kCapVoltage + 1]};
    const Vec2 zeta_v{x[kZetaV], x[kZetaV + 1]};
    const Vec2 ev = v - vhat;
    if (order_ == ModelOrder::eighth) {
        // Current loop collapsed: the cap is driven by the voltage loop output.
        const Vec2 dv = inv_cf_ * (-k_pv_ * ev - k_rv_ * zeta_v);
        dxdt[kCapVoltage] = dv.d;
        dxdt[kCapVoltage + 1] = dv.q;
    } else {
        const Vec2 i_f{x[kFilterCurrent], x[kFilterCurrent + 1]};
        const Vec2 dv = inv_cf_ * (i_f - i - y_f_ * v);
        dxdt[kCapVoltage] = dv.d;
        dxdt[kCapVoltage + 1] = dv.q;
    }
    const Vec2 dzeta_v = omega_delta_ * Vec2{-zeta_v.q, zeta_v.d} + ev;
    dxdt[kZetaV] = dzeta_v.d;
    dxdt[kZetaV + 1] = dzeta_v.q;
    if (order_ == ModelOrder::eighth) return;

    const Vec2 i_f{x[kFilterCurrent], x[kFilterCurrent + 1]};
    const Vec2 zeta_c{x[kZetaC], x[kZetaC + 1]};
    const Vec2 i_ref = -k_pv_ * ev - k_rv_ * zeta_v + y_f_ * v + i;
    const Vec2 ec = i_f - i_ref;
    const Vec2 di_f = inv_lf_ * (-k_pc_ * ec - k_rc_ * zeta_c);
    dxdt[kFilterCurrent] = di_f.d;
    dxdt[kFilterCurrent + 1] = di_f.q;
    const Vec2 dzeta_c = omega_delta_ * Vec2{-zeta_c.q, zeta_c.d} + ec;
    dxdt[kZetaC] = dzeta_c.d;
    dxdt[kZetaC + 1] = dzeta_c.q;
}

void rhs_second_order(const SystemParams& params, const double x[2], double dxdt[2]) {
    CompiledModel(params, ModelOrder::second).rhs(x, dxdt);
}

void rhs_fourth_order(const SystemParams& params, const double x[4], double dxdt[4]) {
    CompiledModel(params, ModelOrder::fourth).rhs(x, dxdt);
}

void rhs_eighth_order(const SystemParams& params, const double x[8], double dxdt[8]) {
    CompiledModel(params, ModelOrder::eighth).rhs(x, dxdt);
}

void rhs_full_order(const SystemParams& params, const double x[12], double dxdt[12]) {
    CompiledModel(params, ModelOrder::full).rhs(x, dxdt);
}

void rhs_off_grid(const SystemParams& params, const double x[2], double dxdt[2]) {
    CompiledModel(params, ModelOrder::second, /*stationary_frame=*/true).rhs(x, dxdt);
}

void rhs_polar(const SystemParams& params, const double x[2], double dxdt[2]) {
    const double v = x[0], delta = x[1];
    const Vec2 v_rect{v * std::cos(delta), v * std::sin(delta)};
    const Vec2 i = params.y_mat() * (v_rect - params.v_g_vec());
    // sigma_phi + j rho_phi = e^{j phi} * conj(s)/||v||^2
    const NormalizedPower np = normalized_power(v_rect, i);
    const std::complex<double> rot =
        std::polar(1.0, params.ctrl.phi) *
        std::complex<double>(np.rho, -np.sigma);
    const double sigma_phi = rot.real();
    const double rho_phi = rot.imag();
    const std::complex<double> rot_star = params.rotated_sigma_star();
    const double eta = params.ctrl.eta;
    const double vstar2 = params.ctrl.v_star * params.ctrl.v_star;
    dxdt[0] = v * (eta * (rot_star.real() - sigma_phi) +
                   eta * params.ctrl.alpha * (vstar2 - v * v) / vstar2);
    dxdt[1] = params.omega_delta() + eta * (rot_star.imag() - rho_phi);
}

Vec2 voltage_loop_reference(const SystemParams& params, const Vec2& vhat,
                            const Vec2& i, const Vec2& v, const Vec2& zeta_v) {
    return -params.filter.k_pv * (v - vhat) - params.filter.k_rv * zeta_v +
           params.y_f_mat() * v + i;
}

}  // namespace cdroop
