#include "czupt/actuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace czupt {

namespace {

// Least-squares solve restricted to the passive set; other entries are 0.
Vec4 passive_solve(const Mat4& m, const Vec4& b, const std::array<bool, 4>& passive) {
  int n = 0;
  std::array<int, 4> idx{};
  for (int i = 0; i < 4; ++i) {
    if (passive[i]) idx[n++] = i;
  }
  Vec4 z = Vec4::Zero();
  if (n == 0) return z;
  MatX sub(4, n);
  for (int j = 0; j < n; ++j) sub.col(j) = m.col(idx[j]);
  const VecX zs = sub.colPivHouseholderQr().solve(b);
  for (int j = 0; j < n; ++j) z(idx[j]) = zs(j);
  return z;
}

}  // namespace

NnlsResult nnls(const Mat4& m, const Vec4& b, double tol) {
  const int n = 4;
  const int max_iter = 4 * n;
  std::array<bool, 4> passive{false, false, false, false};
  Vec4 x = Vec4::Zero();
  NnlsResult res;
  // Gradient tolerance relative to the problem scale.
  const double gtol = tol * m.norm() * b.norm();

  for (int outer = 0;; ++outer) {
    const Vec4 w = m.transpose() * (b - m * x);
    int best = -1;
    double best_w = gtol;
    for (int i = 0; i < n; ++i) {
      if (!passive[i] && w(i) > best_w) {
        best_w = w(i);
        best = i;
      }
    }
    if (best < 0) break;
    if (outer >= max_iter) throw NoConvergence("nnls: active-set iteration limit reached");
    passive[best] = true;
    res.iterations = outer + 1;

    for (int inner = 0; inner <= max_iter; ++inner) {
      const Vec4 z = passive_solve(m, b, passive);
      bool feasible = true;
      for (int i = 0; i < n; ++i) {
        if (passive[i] && z(i) <= 0.0) feasible = false;
      }
      if (feasible) {
        x = z;
        break;
      }
      if (inner == max_iter) throw NoConvergence("nnls: inner loop did not terminate");
      double alpha = 1.0;
      for (int i = 0; i < n; ++i) {
        if (passive[i] && z(i) <= 0.0) alpha = std::min(alpha, x(i) / (x(i) - z(i)));
      }
      x += alpha * (z - x);
      for (int i = 0; i < n; ++i) {
        if (passive[i] && x(i) <= tol * x.cwiseAbs().maxCoeff()) {
          passive[i] = false;
          x(i) = 0.0;
        }
      }
    }
  }
  res.x = x.cwiseMax(0.0);
  res.residual_norm = (m * res.x - b).norm();
  return res;
}

double nnls_kkt_violation(const Mat4& m, const Vec4& b, const Vec4& x) {
  const Vec4 g = m.transpose() * (m * x - b);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    worst = std::max(worst, -x(i));
    if (x(i) > 0.0) {
      worst = std::max(worst, std::abs(g(i)));
    } else {
      worst = std::max(worst, -g(i));
    }
  }
  return worst;
}

ActuatorLimits ActuatorLimits::from_hover(const VehicleParams& p, double lo_ratio,
                                          double hi_ratio) {
  const double w = hover_rotor_speed(p);
  ActuatorLimits lim{lo_ratio * w, hi_ratio * w};
  lim.validate();
  return lim;
}

void ActuatorLimits::validate() const {
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw ConfigError("actuator limits require 0 < omega_min < omega_max");
  }
}

RotorSpeeds allocate_nnls(const ControlInput& u, const Mat4& mixer) {
  return RotorSpeeds(nnls(mixer, u.data).x.cwiseSqrt());
}

RotorSpeeds clamp_speeds(const RotorSpeeds& des, const ActuatorLimits& lim) {
  return RotorSpeeds(des.omega.cwiseMax(lim.omega_min).cwiseMin(lim.omega_max));
}

bool saturated(const RotorSpeeds& des, const ActuatorLimits& lim) {
  return (des.omega.array() < lim.omega_min).any() || (des.omega.array() > lim.omega_max).any();
}

RotorLagState rotor_lag_step(const RotorLagState& st, const RotorSpeeds& cmd, double dt) {
  if (!(dt > 0.0)) throw ConfigError("rotor_lag_step: dt must be positive");
  const double decay = std::exp(-dt / st.tau_rot);
  RotorLagState out = st;
  out.omega_out.omega = cmd.omega + (st.omega_out.omega - cmd.omega) * decay;
  return out;
}

ControlInput applied_wrench(const RotorSpeeds& omega_out, const Mat4& mixer) {
  return ControlInput(mixer * omega_out.squared());
}

}  // namespace czupt
