#pragma once

#include "czupt/mathcore.hpp"

namespace czupt {

/// 12-dim rigid-body state in SI units, ordered as
/// position (inertial), velocity (body), Euler angles (roll, pitch, yaw),
/// body rates.
struct StateVector {
  Vec12 data = Vec12::Zero();

  StateVector() = default;
  explicit StateVector(const Vec12& v) : data(v) {}

  auto xi() { return data.segment<3>(0); }
  auto xi() const { return data.segment<3>(0); }
  auto v() { return data.segment<3>(3); }
  auto v() const { return data.segment<3>(3); }
  auto eta() { return data.segment<3>(6); }
  auto eta() const { return data.segment<3>(6); }
  auto omega() { return data.segment<3>(9); }
  auto omega() const { return data.segment<3>(9); }

  static constexpr int kXi = 0;
  static constexpr int kV = 3;
  static constexpr int kEta = 6;
  static constexpr int kOmega = 9;
};

/// Collective thrust [N] and body torques [N m].
struct ControlInput {
  Vec4 data = Vec4::Zero();

  ControlInput() = default;
  explicit ControlInput(const Vec4& u) : data(u) {}
  ControlInput(double thrust, double roll, double pitch, double yaw)
      : data(thrust, roll, pitch, yaw) {}

  double thrust() const { return data(0); }
  auto torque() const { return data.segment<3>(1); }
};

/// Rotor angular speeds [rad/s], non-negative. Rotors 1 and 3 spin
/// clockwise, 2 and 4 counter-clockwise.
struct RotorSpeeds {
  Vec4 omega = Vec4::Zero();

  RotorSpeeds() = default;
  explicit RotorSpeeds(const Vec4& w) : omega(w) {}
  static RotorSpeeds uniform(double w) { return RotorSpeeds(Vec4::Constant(w)); }

  Vec4 squared() const { return omega.array().square(); }
};

/// Airframe and aerodynamic constants. Defaults are the reference
/// 0.97 kg quadrotor.
struct VehicleParams {
  double mass = 0.9689;                    // kg
  Vec3 inertia{0.0159, 0.0140, 0.0279};    // diag(Jxx, Jyy, Jzz), kg m^2
  double arm = 0.15;                       // m
  double k_thrust = 6.01e-6;               // kg m / rad^2
  double k_torque = 6.33e-8;               // kg m^2 / rad^2
  double gravity = 9.81;                   // m/s^2
  double air_density = 1.225;              // kg/m^3
  double rotor_area = 0.0491;              // m^2
  double c_thrust = 6.38e-3;
  double c_torque = 5.392e-4;
  double blade_radius = 0.125;             // m
  double rotor_efficiency = 0.80;
  double tau_rotor = 0.02;                 // s

  double weight() const { return mass * gravity; }
  Mat3 inertia_matrix() const { return inertia.asDiagonal(); }

  /// Throws ConfigError when any constant is non-positive.
  void validate() const;
};

constexpr double kGimbalMargin = 1e-6;

/// Body-to-inertial rotation for Euler angles (roll, pitch, yaw) under the
/// extrinsic z-y-x convention.
Mat3 rotation_body_to_inertial(const Vec3& eta);

/// W(eta) with eta_dot = W(eta) * omega_body.
Mat3 euler_rate_matrix(const Vec3& eta);

/// Inertial z axis expressed in body coordinates.
Vec3 inertial_up_in_body(const Vec3& eta);

/// Maps squared rotor speeds to (thrust, roll, pitch, yaw) torques.
Mat4 mixer_matrix(const VehicleParams& p);

/// Full nonlinear Newton-Euler derivative of the state. Body thrust acts
/// along the body z axis; Coriolis and gyroscopic terms are retained.
Vec12 dynamics(const StateVector& x, const ControlInput& u, const VehicleParams& p);

/// Specific force sensed by an ideal body-mounted accelerometer.
Vec3 specific_force(const ControlInput& u, const VehicleParams& p);

/// Per-rotor speed that balances gravity, sqrt(m g / (4 k_T)).
double hover_rotor_speed(const VehicleParams& p);

inline double rad_per_s_to_rpm(double w) { return w * 60.0 / (2.0 * kPi); }

/// Wraps yaw into (-pi, pi]; throws GimbalProximity if roll or pitch leave
/// (-pi/2, pi/2) by less than the margin.
void normalize_attitude(StateVector& x);

}  // namespace czupt
