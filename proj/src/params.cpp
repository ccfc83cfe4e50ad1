#include "cdroop/params.hpp"

namespace cdroop {

void set_param_field(SystemParams& params, const std::string& name, double value) {
    if (name == "r_g") params.grid.r_g = value;
    else if (name == "l_g") params.grid.l_g = value;
    else if (name == "omega_g") params.grid.omega_g = value;
    else if (name == "v_g") params.grid.v_g = value;
    else if (name == "eta") params.ctrl.eta = value;
    else if (name == "alpha") params.ctrl.alpha = value;
    else if (name == "phi") params.ctrl.phi = value;
    else if (name == "p_star") params.ctrl.p_star = value;
    else if (name == "q_star") params.ctrl.q_star = value;
    else if (name == "v_star") params.ctrl.v_star = value;
    else if (name == "r_f") params.filter.r_f = value;
    else if (name == "l_f") params.filter.l_f = value;
    else if (name == "g_f") params.filter.g_f = value;
    else if (name == "c_f") params.filter.c_f = value;
    else if (name == "k_pv") params.filter.k_pv = value;
    else if (name == "k_rv") params.filter.k_rv = value;
    else if (name == "k_pc") params.filter.k_pc = value;
    else if (name == "k_rc") params.filter.k_rc = value;
    else if (name == "s_rated_va") params.base.s_rated_va = value;
    else if (name == "v_rated_v") params.base.v_rated_v = value;
    else if (name == "f_nominal_hz") params.base.f_nominal_hz = value;
    else throw std::invalid_argument("unknown parameter field: " + name);
}

const std::vector<std::string>& settable_param_fields() {
    static const std::vector<std::string> names = {
        "r_g", "l_g", "omega_g", "v_g", "eta", "alpha", "phi", "p_star",
        "q_star", "v_star", "r_f", "l_f", "g_f", "c_f", "k_pv", "k_rv",
        "k_pc", "k_rc", "s_rated_va", "v_rated_v", "f_nominal_hz"};
    return names;
}

}  // namespace cdroop
