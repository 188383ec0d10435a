#include "czupt/vehicle.hpp"

#include <cmath>
#include <string>

namespace czupt {

void VehicleParams::validate() const {
  const bool ok = mass > 0 && (inertia.array() > 0).all() && arm > 0 && k_thrust > 0 &&
                  k_torque > 0 && gravity > 0 && air_density > 0 && rotor_area > 0 &&
                  c_thrust > 0 && c_torque > 0 && blade_radius > 0 && rotor_efficiency > 0 &&
                  rotor_efficiency <= 1.0 && tau_rotor > 0;
  if (!ok) throw ConfigError("vehicle parameters must be strictly positive");
}

namespace {

void check_pitch(double theta) {
  if (std::abs(theta) >= kPi / 2 - kGimbalMargin) {
    throw GimbalProximity("pitch " + std::to_string(theta) + " rad at gimbal lock");
  }
}

}  // namespace

Mat3 rotation_body_to_inertial(const Vec3& eta) {
  check_pitch(eta(1));
  const double cf = std::cos(eta(0)), sf = std::sin(eta(0));
  const double ct = std::cos(eta(1)), st = std::sin(eta(1));
  const double cp = std::cos(eta(2)), sp = std::sin(eta(2));
  Mat3 r;
  r << ct * cp, sf * st * cp - cf * sp, cf * st * cp + sf * sp,
       ct * sp, sf * st * sp + cf * cp, cf * st * sp - sf * cp,
       -st,     sf * ct,                cf * ct;
  return r;
}

Mat3 euler_rate_matrix(const Vec3& eta) {
  check_pitch(eta(1));
  const double cf = std::cos(eta(0)), sf = std::sin(eta(0));
  const double ct = std::cos(eta(1)), tt = std::tan(eta(1));
  Mat3 w;
  w << 1.0, sf * tt, cf * tt,
       0.0, cf, -sf,
       0.0, sf / ct, cf / ct;
  return w;
}

Vec3 inertial_up_in_body(const Vec3& eta) {
  const double cf = std::cos(eta(0)), sf = std::sin(eta(0));
  const double ct = std::cos(eta(1)), st = std::sin(eta(1));
  return {-st, sf * ct, cf * ct};
}

Mat4 mixer_matrix(const VehicleParams& p) {
  const double kt = p.k_thrust, km = p.k_torque, lk = p.arm * p.k_thrust;
  Mat4 m;
  m << kt,  kt,  kt,  kt,
       0.0, -lk, 0.0, lk,
       -lk, 0.0, lk,  0.0,
       -km, km,  -km, km;
  return m;
}

Vec12 dynamics(const StateVector& x, const ControlInput& u, const VehicleParams& p) {
  const Vec3 eta = x.eta();
  const Vec3 v = x.v();
  const Vec3 w = x.omega();
  const Mat3 j = p.inertia_matrix();

  Vec12 dx;
  dx.segment<3>(0) = rotation_body_to_inertial(eta) * v;
  dx.segment<3>(3) = Vec3(0.0, 0.0, u.thrust() / p.mass) - w.cross(v) -
                     p.gravity * inertial_up_in_body(eta);
  dx.segment<3>(6) = euler_rate_matrix(eta) * w;
  dx.segment<3>(9) = (Vec3(u.torque()) - w.cross(j * w)).cwiseQuotient(p.inertia);
  return dx;
}

Vec3 specific_force(const ControlInput& u, const VehicleParams& p) {
  return {0.0, 0.0, u.thrust() / p.mass};
}

double hover_rotor_speed(const VehicleParams& p) {
  return std::sqrt(p.weight() / (4.0 * p.k_thrust));
}

void normalize_attitude(StateVector& x) {
  if (std::abs(x.data(6)) >= kPi / 2 - kGimbalMargin ||
      std::abs(x.data(7)) >= kPi / 2 - kGimbalMargin) {
    throw GimbalProximity("roll/pitch left the valid Euler range");
  }
  x.data(8) = wrap_angle(x.data(8));
}

}  // namespace czupt
