#pragma once

#include "cdroop/mat2.hpp"
#include "cdroop/params.hpp"
#include "cdroop/state.hpp"

namespace cdroop {

// Conjugated normalized power of a voltage/current pair:
//   rho = p/||v||^2 (active), sigma = q/||v||^2 (reactive).
// Requires ||v|| > 0.
struct NormalizedPower {
    double rho = 0.0;
    double sigma = 0.0;
};
NormalizedPower normalized_power(const Vec2& v, const Vec2& i);

// Power pair rotated by e^{j(pi/2 - phi)}: at phi = pi/2 this is the
// identity, at phi = 0 active and reactive swap roles.
struct RotatedPower {
    double p_phi = 0.0;
    double q_phi = 0.0;
};
RotatedPower rotated_power(double p, double q, double phi);

// Precomputed right-hand-side data for one parameter set. Rebuilt whenever
// an event changes the parameters; keeps the integrator inner loop free of
// trigonometry and divisions.
class CompiledModel {
  public:
    CompiledModel(const SystemParams& params, ModelOrder order,
                  bool stationary_frame = false);

    ModelOrder order() const { return order_; }
    int dim() const { return dimension(order_); }
    bool stationary_frame() const { return stationary_frame_; }
    const SystemParams& params() const { return params_; }

    // dx/dt = f(x); all models here are autonomous within a segment.
    void rhs(const double* x, double* dxdt) const;

    // Rotation rate of the reference frame, rad/s (grid frequency for the
    // synchronous-frame models, zero for the stationary off-grid model).
    double frame_rate() const;

  private:
    SystemParams params_;
    ModelOrder order_;
    bool stationary_frame_;

    // Cached pieces of the vector field.
    double frame_j_rate_ = 0.0;  // coefficient of J in the oscillator block
    double eta_ = 0.0;
    double alpha_over_vstar2_ = 0.0;
    double vstar2_ = 0.0;
    Mat2 s_phi_star_;
    Mat2 r_phi_;
    Mat2 y_phi_;
    Mat2 y_;
    Mat2 z_;
    Mat2 y_f_;
    Vec2 v_g_;
    double inv_lg_ = 0.0;
    double inv_cf_ = 0.0;
    double inv_lf_ = 0.0;
    double k_pv_ = 0.0, k_rv_ = 0.0, k_pc_ = 0.0, k_rc_ = 0.0;
    double omega_delta_ = 0.0;
};

// Vector fields of the model family, synchronous (grid) frame.
// These are thin convenience wrappers over CompiledModel for callers that
// hold bare parameter sets; the integrator uses CompiledModel directly.
void rhs_second_order(const SystemParams& params, const double x[2], double dxdt[2]);
void rhs_fourth_order(const SystemParams& params, const double x[4], double dxdt[4]);
void rhs_eighth_order(const SystemParams& params, const double x[8], double dxdt[8]);
void rhs_full_order(const SystemParams& params, const double x[12], double dxdt[12]);

// Islanded operation feeding the (r_g, l_g) branch as a passive load, in the
// stationary frame; v_g is ignored (no grid source).
void rhs_off_grid(const SystemParams& params, const double x[2], double dxdt[2]);

// Polar form of the second-order model in the grid frame; x = [v, delta]
// with v > 0. Equivalent to rhs_second_order wherever both are defined.
void rhs_polar(const SystemParams& params, const double x[2], double dxdt[2]);

// Reference current commanded by the voltage loop (also the steady-state
// value of the filter inductor current).
Vec2 voltage_loop_reference(const SystemParams& params, const Vec2& vhat,
                            const Vec2& i, const Vec2& v, const Vec2& zeta_v);

}  // namespace cdroop
