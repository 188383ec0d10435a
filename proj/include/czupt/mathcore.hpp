#pragma once

#include <Eigen/Dense>

#include "czupt/errors.hpp"

namespace czupt {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat12x4 = Eigen::Matrix<double, 12, 4>;
using Mat4x12 = Eigen::Matrix<double, 4, 12>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
/// Row-stacked measurement selector over the 12-dim state.
using MeasMatrix = Eigen::Matrix<double, Eigen::Dynamic, 12>;

constexpr double kPi = 3.14159265358979323846;

/// Cross-product matrix: skew(v) * w == v.cross(w).
Mat3 skew(const Vec3& v);

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Classical fourth-order Runge-Kutta step with the input held constant
/// over [t, t + dt]. `field(x, u)` returns dx/dt.
template <typename Field, typename State, typename Input>
State rk4_step(Field&& field, const State& x, const Input& u, double dt) {
  const State k1 = field(x, u);
  const State k2 = field(State(x + 0.5 * dt * k1), u);
  const State k3 = field(State(x + 0.5 * dt * k2), u);
  const State k4 = field(State(x + dt * k3), u);
  State next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    throw NonFiniteState("rk4_step produced a non-finite state");
  }
  return next;
}

/// Numerical rank: singular values above tol * sigma_max.
int rank_svd(const Eigen::Ref<const MatX>& m, double tol = 1e-9);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace czupt
