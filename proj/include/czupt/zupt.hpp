#pragma once

#include <string>
#include <vector>

#include "czupt/linmodel.hpp"
#include "czupt/mathcore.hpp"

namespace czupt {

enum class ForceStatistic {
  /// || mean(f) - g e_z^B(eta_hat) ||
  GravityCompensated,
  /// | ||mean(f)|| - g |
  RawNorm,
};

struct DetectorConfig {
  double delta_f = 0.2;      // m/s^2
  double delta_v = 0.05;     // m/s
  int window = 50;           // samples
  double sigma_zupt = 0.005; // m/s
  double gravity = 9.81;
  ForceStatistic force_statistic = ForceStatistic::GravityCompensated;
  /// At most one applied ZUPT per window/2 steps.
  bool rate_limit = true;

  static DetectorConfig strict();
  static DetectorConfig permissive();
  /// "strict" or "permissive"; throws ConfigError otherwise.
  static DetectorConfig preset(const std::string& name);

  void validate() const;
};

struct DetectorDecision {
  bool stationary = false;   // both statistics under threshold, buffers full
  bool apply_zupt = false;   // stationary and not rate-limited
  double force_stat = 0.0;
  double velocity_stat = 0.0;
};

/// Sliding windows of the last `window` specific-force and velocity
/// samples.
class DetectorState {
 public:
  explicit DetectorState(int window = 50);

  void push(const Vec3& f, const Vec3& v);
  bool full() const { return count_ >= static_cast<long>(f_.size()); }
  Vec3 mean_force() const;
  Vec3 mean_velocity() const;

  long samples() const { return count_; }
  int window() const { return static_cast<int>(f_.size()); }
  long triggers = 0;
  long last_zupt = -1;   // sample index of the last applied ZUPT
  bool last_decision = false;

 private:
  std::vector<Vec3> f_;
  std::vector<Vec3> v_;
  long count_ = 0;
};

/// Pushes one sample and evaluates the stationarity test. `eta_hat` is the
/// estimated attitude used for gravity compensation.
DetectorDecision detector_step(DetectorState& ds, const Vec3& f_meas, const Vec3& v_hat,
                               const Vec3& eta_hat, const DetectorConfig& cfg);

struct ZuptMeasurement {
  Vec3 y = Vec3::Zero();
  MeasMatrix C;
  MatX V;
};

/// Zero-velocity pseudo-measurement: y = 0, velocity selector rows,
/// V = sigma_zupt^2 I.
ZuptMeasurement zupt_measurement(const DetectorConfig& cfg);

/// Fraction of detections made while the true speed exceeded delta_v.
/// Zero when nothing was detected. Throws LengthMismatch.
double false_positive_rate(const std::vector<bool>& detections,
                           const std::vector<double>& true_speed, const DetectorConfig& cfg);

}  // namespace czupt
