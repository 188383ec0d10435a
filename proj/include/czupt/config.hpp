#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "czupt/battery.hpp"
#include "czupt/linmodel.hpp"
#include "czupt/lqg.hpp"
#include "czupt/vehicle.hpp"
#include "czupt/zupt.hpp"

namespace czupt {

enum class GainMode { Frozen, Live };
enum class NoiseInterpretation { Scaled, Verbatim };
enum class InitialEstimate { Sampled, Truth, Equilibrium };
enum class PredictInput { Command, Applied };

struct EstimatorConfig {
  GainMode gain_mode = GainMode::Frozen;
  /// Attitude and body-rate rows every step in addition to position fixes.
  bool attitude_aiding = true;
  /// How the per-step W and V tables become continuous intensities for the
  /// steady-state gain: Scaled uses W/dt and V*dt, Verbatim uses them as is.
  NoiseInterpretation synthesis_noise = NoiseInterpretation::Scaled;
  /// Frozen mode: position corrections are scaled by the number of steps
  /// since the previous fix.
  bool position_hold = true;
  Vec4 p0_sigma{0.1, 0.1, 0.01, 0.01};  // per block: m, m/s, rad, rad/s
  InitialEstimate initial_estimate = InitialEstimate::Sampled;
  PredictInput predict_input = PredictInput::Command;

  Mat12 initial_covariance() const;
};

/// Plant disturbance: zero-mean Gaussian per-step increments. Base standard
/// deviations are sigma_f*sqrt(dt^3/3), sigma_f*sqrt(dt), sigma_omega*sqrt(dt)
/// and sigma_omega*sqrt(dt) for the four blocks, each multiplied by
/// sqrt(scale).
struct DisturbanceConfig {
  Vec4 scale{1.0, 1.0, 1.0, 1.0};  // position, velocity, attitude, rates
};

struct ScenarioConfig {
  double dt = 0.001;
  double duration = 10.0;
  double gamma = 1.0;
  std::uint64_t seed = 1;
  StateVector x0 = default_initial_state();

  VehicleParams vehicle;
  NoiseConfig noise;
  /// When false the plant and sensors run noise-free while the estimator
  /// keeps the nominal covariances.
  bool inject_noise = true;
  BatteryParams battery;
  bool battery_enabled = true;
  bool resistances_in_milliohm = false;
  double omega_min_ratio = 0.1;
  double omega_max_ratio = 1.5;

  bool detector_enabled = false;
  DetectorConfig detector;

  EstimatorConfig estimator;
  DisturbanceConfig disturbance;
  BrysonTolerances tolerances = BrysonTolerances::for_vehicle(VehicleParams{});

  /// Roll or pitch beyond this magnitude flags the run as diverged.
  double divergence_attitude = 1.4;  // rad
  double divergence_norm = 1e6;
  int log_every = 10;

  static StateVector default_initial_state();

  int update_period() const;  // round(1 / gamma)
  long steps() const;
  BatteryParams effective_battery() const;
  /// Throws ConfigError.
  void validate() const;
};

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::string& path);

}  // namespace czupt
