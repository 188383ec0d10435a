#pragma once

#include "czupt/mathcore.hpp"
#include "czupt/vehicle.hpp"

namespace czupt {

struct NnlsResult {
  Vec4 x = Vec4::Zero();
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Lawson-Hanson active-set solve of min ||Mx - b||^2 subject to x >= 0.
/// Throws NoConvergence after 4n outer iterations.
NnlsResult nnls(const Mat4& m, const Vec4& b, double tol = 1e-10);

/// Largest violation of the NNLS optimality conditions at x:
/// negative x, negative gradient on zero coordinates, nonzero gradient on
/// positive coordinates. The gradient is M'(Mx - b).
double nnls_kkt_violation(const Mat4& m, const Vec4& b, const Vec4& x);

struct ActuatorLimits {
  double omega_min = 0.0;  // rad/s
  double omega_max = 0.0;  // rad/s

  /// omega_min = 0.1 Omega_hov, omega_max = 1.5 Omega_hov.
  static ActuatorLimits from_hover(const VehicleParams& p, double lo_ratio = 0.1,
                                   double hi_ratio = 1.5);
  void validate() const;
};

/// Desired rotor speeds sqrt(x*) from the NNLS inversion of the mixer.
RotorSpeeds allocate_nnls(const ControlInput& u, const Mat4& mixer);

RotorSpeeds clamp_speeds(const RotorSpeeds& des, const ActuatorLimits& lim);

/// True when any desired speed lies outside [omega_min, omega_max].
bool saturated(const RotorSpeeds& des, const ActuatorLimits& lim);

struct RotorLagState {
  RotorSpeeds omega_out;
  double tau_rot = 0.02;  // s
};

/// Exact zero-order-hold update of the first-order rotor lag.
RotorLagState rotor_lag_step(const RotorLagState& st, const RotorSpeeds& cmd, double dt);

/// u_out = M * Omega_out^2.
ControlInput applied_wrench(const RotorSpeeds& omega_out, const Mat4& mixer);

}  // namespace czupt
