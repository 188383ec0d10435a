#include "czupt/linmodel.hpp"

#include <cmath>

namespace czupt {

std::string to_string(MeasurementKind k) {
  switch (k) {
    case MeasurementKind::Position: return "position";
    case MeasurementKind::Velocity: return "velocity";
    case MeasurementKind::Attitude: return "attitude";
    case MeasurementKind::BodyRates: return "body_rates";
  }
  return "unknown";
}

MeasurementSet::MeasurementSet(std::initializer_list<MeasurementKind> kinds) {
  for (auto k : kinds) add(k);
}

MeasurementSet& MeasurementSet::add(MeasurementKind k) {
  bits_ |= 1u << static_cast<int>(k);
  return *this;
}

int MeasurementSet::rows() const { return 3 * static_cast<int>(kinds().size()); }

std::vector<MeasurementKind> MeasurementSet::kinds() const {
  std::vector<MeasurementKind> out;
  for (int i = 0; i < 4; ++i) {
    if ((bits_ >> i) & 1u) out.push_back(static_cast<MeasurementKind>(i));
  }
  return out;
}

EquilibriumPoint EquilibriumPoint::hover(const VehicleParams& p, const Vec3& position,
                                         double yaw) {
  EquilibriumPoint eq;
  eq.x_e.xi() = position;
  eq.x_e.data(8) = yaw;
  eq.u_e = ControlInput(p.weight(), 0.0, 0.0, 0.0);
  return eq;
}

void EquilibriumPoint::validate(const VehicleParams& p) const {
  if (!x_e.v().isZero(0.0) || !x_e.omega().isZero(0.0)) {
    throw ConfigError("hover equilibrium requires zero body velocity and rates");
  }
  if (std::abs(u_e.thrust() - p.weight()) > 1e-12 * p.weight() || !u_e.torque().isZero(0.0)) {
    throw ConfigError("hover equilibrium input must be (m g, 0, 0, 0)");
  }
}

Jacobians linearize_hover(const VehicleParams& p, const EquilibriumPoint& eq) {
  eq.validate(p);
  Jacobians j;
  j.A.setZero();
  j.A.block<3, 3>(0, 3) = Mat3::Identity() + skew(eq.x_e.eta());
  j.A.block<3, 3>(3, 6) = -skew(Vec3(0.0, 0.0, p.gravity));
  j.A.block<3, 3>(6, 9) = Mat3::Identity();

  j.B.setZero();
  j.B(5, 0) = 1.0 / p.mass;
  j.B.block<3, 3>(9, 1) = p.inertia.cwiseInverse().asDiagonal();
  return j;
}

Jacobians finite_difference_jacobians(const VehicleParams& p, const EquilibriumPoint& eq,
                                      double step) {
  Jacobians j;
  for (int i = 0; i < 12; ++i) {
    StateVector plus = eq.x_e, minus = eq.x_e;
    plus.data(i) += step;
    minus.data(i) -= step;
    j.A.col(i) = (dynamics(plus, eq.u_e, p) - dynamics(minus, eq.u_e, p)) / (2.0 * step);
  }
  for (int i = 0; i < 4; ++i) {
    ControlInput plus = eq.u_e, minus = eq.u_e;
    plus.data(i) += step;
    minus.data(i) -= step;
    j.B.col(i) = (dynamics(eq.x_e, plus, p) - dynamics(eq.x_e, minus, p)) / (2.0 * step);
  }
  return j;
}

MeasMatrix measurement_matrix(const MeasurementSet& kinds) {
  if (kinds.empty()) throw EmptyMeasurementSet();
  MeasMatrix c = MeasMatrix::Zero(kinds.rows(), 12);
  int row = 0;
  for (auto k : kinds.kinds()) {
    c.block<3, 3>(row, 3 * static_cast<int>(k)).setIdentity();
    row += 3;
  }
  return c;
}

MatX measurement_covariance(const MeasurementSet& kinds, const NoiseConfig& noise) {
  if (kinds.empty()) throw EmptyMeasurementSet();
  VecX diag(kinds.rows());
  int row = 0;
  for (auto k : kinds.kinds()) {
    double s = 0.0;
    switch (k) {
      case MeasurementKind::Position: s = noise.sigma_gnss; break;
      case MeasurementKind::Velocity: s = noise.sigma_zupt; break;
      case MeasurementKind::Attitude: s = noise.sigma_eta; break;
      case MeasurementKind::BodyRates: s = noise.sigma_gyro; break;
    }
    diag.segment<3>(row).setConstant(s * s);
    row += 3;
  }
  return diag.asDiagonal();
}

MatX observability_matrix(const Mat12& a, const MeasMatrix& c) {
  const Eigen::Index m = c.rows();
  MatX obs(12 * m, 12);
  MatX block = c;
  for (int k = 0; k < 12; ++k) {
    obs.middleRows(k * m, m) = block;
    block = block * a;
  }
  return obs;
}

int observability_rank(const Mat12& a, const MeasMatrix& c) {
  return rank_svd(observability_matrix(a, c));
}

Mat12 process_covariance(const NoiseConfig& noise, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const double sf2 = noise.sigma_f * noise.sigma_f;
  const double sw2 = noise.sigma_omega * noise.sigma_omega;
  Vec12 diag;
  diag.segment<3>(0).setConstant(sf2 * dt * dt * dt / 3.0);
  diag.segment<3>(3).setConstant(sf2 * dt);
  diag.segment<3>(6).setConstant(sw2 * dt);
  diag.segment<3>(9).setConstant(sw2 / dt);
  return diag.asDiagonal();
}

std::pair<Mat12, Mat12x4> discretize(const Mat12& a, const Mat12x4& b, double dt) {
  return {Mat12::Identity() + a * dt, b * dt};
}

}  // namespace czupt
