#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "czupt/mathcore.hpp"
#include "czupt/vehicle.hpp"

namespace czupt {

/// Sensor channels, one per 3-dim state block.
enum class MeasurementKind { Position = 0, Velocity = 1, Attitude = 2, BodyRates = 3 };

std::string to_string(MeasurementKind k);

/// Ordered, duplicate-free set of measurement kinds (state-block order).
class MeasurementSet {
 public:
  MeasurementSet() = default;
  MeasurementSet(std::initializer_list<MeasurementKind> kinds);

  MeasurementSet& add(MeasurementKind k);
  bool contains(MeasurementKind k) const { return (bits_ >> static_cast<int>(k)) & 1u; }
  bool empty() const { return bits_ == 0; }
  int rows() const;
  std::vector<MeasurementKind> kinds() const;

 private:
  unsigned bits_ = 0;
};

/// Sensor and process noise levels (1-sigma), reference-airframe defaults.
struct NoiseConfig {
  double sigma_f = 0.002;       // accelerometer noise density, m/s^2/sqrt(Hz)
  double sigma_omega = 0.001;   // body-rate process noise, rad/s
  double sigma_eta = 0.001;     // attitude sensing, rad
  double sigma_gyro = 0.001;    // rate sensing, rad/s
  double sigma_gnss = 3.0;      // position fix, m
  double sigma_zupt = 0.005;    // zero-velocity pseudo-measurement, m/s
};

struct EquilibriumPoint {
  StateVector x_e;
  ControlInput u_e;

  /// Level hover at `position` with heading `yaw`.
  static EquilibriumPoint hover(const VehicleParams& p, const Vec3& position = Vec3::Zero(),
                                double yaw = 0.0);
  /// Throws ConfigError unless velocities/rates are zero and u_e = (mg,0,0,0).
  void validate(const VehicleParams& p) const;
};

struct Jacobians {
  Mat12 A;
  Mat12x4 B;
};

struct LinearModel {
  Mat12 A;
  Mat12x4 B;
  MeasMatrix C;
  Mat12 W;
  MatX V;
};

/// State and input Jacobians of the small-angle hover model.
Jacobians linearize_hover(const VehicleParams& p, const EquilibriumPoint& eq);

/// Central-difference Jacobians of `dynamics` at the equilibrium.
Jacobians finite_difference_jacobians(const VehicleParams& p, const EquilibriumPoint& eq,
                                      double step = 1e-6);

/// Row-stacked block selectors in state order. Throws EmptyMeasurementSet.
MeasMatrix measurement_matrix(const MeasurementSet& kinds);

/// Diagonal measurement covariance matching measurement_matrix row order.
MatX measurement_covariance(const MeasurementSet& kinds, const NoiseConfig& noise);

/// [C; CA; ...; CA^11].
MatX observability_matrix(const Mat12& a, const MeasMatrix& c);
int observability_rank(const Mat12& a, const MeasMatrix& c);

/// Per-step process covariance with isotropic 3x3 blocks:
/// position s_f^2 dt^3 / 3, velocity s_f^2 dt, attitude s_w^2 dt,
/// rates s_w^2 / dt.
Mat12 process_covariance(const NoiseConfig& noise, double dt);

/// Forward-Euler discretization A_d = I + A dt, B_d = B dt.
std::pair<Mat12, Mat12x4> discretize(const Mat12& a, const Mat12x4& b, double dt);

}  // namespace czupt
