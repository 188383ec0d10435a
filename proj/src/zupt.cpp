#include "czupt/zupt.hpp"

#include <cmath>

#include "czupt/vehicle.hpp"

namespace czupt {

DetectorConfig DetectorConfig::strict() { return DetectorConfig{}; }

DetectorConfig DetectorConfig::permissive() {
  DetectorConfig c;
  c.delta_f = 0.6;
  c.delta_v = 0.15;
  c.window = 200;
  return c;
}

DetectorConfig DetectorConfig::preset(const std::string& name) {
  if (name == "strict") return strict();
  if (name == "permissive") return permissive();
  throw ConfigError("unknown detector preset '" + name + "'");
}

void DetectorConfig::validate() const {
  if (!(delta_f > 0.0) || !(delta_v > 0.0) || window < 1 || !(sigma_zupt > 0.0)) {
    throw ConfigError("detector thresholds and sigma must be positive, window >= 1");
  }
}

DetectorState::DetectorState(int window) {
  if (window < 1) throw ConfigError("detector window must be >= 1");
  f_.assign(static_cast<std::size_t>(window), Vec3::Zero());
  v_.assign(static_cast<std::size_t>(window), Vec3::Zero());
}

void DetectorState::push(const Vec3& f, const Vec3& v) {
  const auto slot = static_cast<std::size_t>(count_ % static_cast<long>(f_.size()));
  f_[slot] = f;
  v_[slot] = v;
  ++count_;
}

namespace {

Vec3 window_mean(const std::vector<Vec3>& buf, long count) {
  const long n = std::min<long>(count, static_cast<long>(buf.size()));
  if (n == 0) return Vec3::Zero();
  Vec3 sum = Vec3::Zero();
  for (long i = 0; i < n; ++i) sum += buf[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(n);
}

}  // namespace

Vec3 DetectorState::mean_force() const { return window_mean(f_, count_); }
Vec3 DetectorState::mean_velocity() const { return window_mean(v_, count_); }

DetectorDecision detector_step(DetectorState& ds, const Vec3& f_meas, const Vec3& v_hat,
                               const Vec3& eta_hat, const DetectorConfig& cfg) {
  if (ds.window() != cfg.window) throw ConfigError("detector state/config window mismatch");
  ds.push(f_meas, v_hat);
  DetectorDecision d;
  const Vec3 mf = ds.mean_force();
  if (cfg.force_statistic == ForceStatistic::GravityCompensated) {
    d.force_stat = (mf - cfg.gravity * inertial_up_in_body(eta_hat)).norm();
  } else {
    d.force_stat = std::abs(mf.norm() - cfg.gravity);
  }
  d.velocity_stat = ds.mean_velocity().norm();
  d.stationary = ds.full() && d.force_stat < cfg.delta_f && d.velocity_stat < cfg.delta_v;
  ds.last_decision = d.stationary;
  if (d.stationary) {
    const long now = ds.samples() - 1;
    const long gap = std::max(1, cfg.window / 2);
    d.apply_zupt = !cfg.rate_limit || ds.last_zupt < 0 || now - ds.last_zupt >= gap;
    if (d.apply_zupt) {
      ds.last_zupt = now;
      ++ds.triggers;
    }
  }
  return d;
}

ZuptMeasurement zupt_measurement(const DetectorConfig& cfg) {
  ZuptMeasurement m;
  m.C = measurement_matrix({MeasurementKind::Velocity});
  m.V = MatX::Identity(3, 3) * (cfg.sigma_zupt * cfg.sigma_zupt);
  return m;
}

double false_positive_rate(const std::vector<bool>& detections,
                           const std::vector<double>& true_speed, const DetectorConfig& cfg) {
  if (detections.size() != true_speed.size()) {
    throw LengthMismatch("detection mask and speed trace differ in length");
  }
  long hits = 0, false_hits = 0;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (!detections[i]) continue;
    ++hits;
    if (true_speed[i] > cfg.delta_v) ++false_hits;
  }
  return hits == 0 ? 0.0 : static_cast<double>(false_hits) / static_cast<double>(hits);
}

}  // namespace czupt
