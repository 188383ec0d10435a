#include "czupt/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace czupt {

using nlohmann::json;

Mat12 EstimatorConfig::initial_covariance() const {
  Vec12 d;
  for (int b = 0; b < 4; ++b) d.segment<3>(3 * b).setConstant(p0_sigma(b) * p0_sigma(b));
  return d.asDiagonal();
}

StateVector ScenarioConfig::default_initial_state() {
  constexpr double deg = kPi / 180.0;
  StateVector x;
  x.xi() = Vec3(0.5, -0.5, 0.3);
  x.eta() = Vec3(2.0 * deg, -2.0 * deg, 5.0 * deg);
  return x;
}

int ScenarioConfig::update_period() const {
  return std::max(1, static_cast<int>(std::lround(1.0 / gamma)));
}

long ScenarioConfig::steps() const { return std::lround(duration / dt); }

BatteryParams ScenarioConfig::effective_battery() const {
  BatteryParams b = resistances_in_milliohm ? battery.with_milliohm_resistances() : battery;
  b.eta_rot = vehicle.rotor_efficiency;
  return b;
}

void ScenarioConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(duration > dt)) throw ConfigError("duration must exceed dt");
  if (!(gamma > 0.0) || gamma > 1.0) throw ConfigError("gamma must lie in (0, 1]");
  if (!(omega_min_ratio > 0.0) || !(omega_max_ratio > omega_min_ratio)) {
    throw ConfigError("rotor limits require 0 < min ratio < max ratio");
  }
  if ((estimator.p0_sigma.array() <= 0.0).any()) throw ConfigError("p0 sigmas must be positive");
  if ((disturbance.scale.array() < 0.0).any()) throw ConfigError("disturbance scales must be >= 0");
  if (log_every < 1) throw ConfigError("log_every must be >= 1");
  if (!x0.data.allFinite()) throw ConfigError("x0 must be finite");
  const NoiseConfig& n = noise;
  for (double s : {n.sigma_f, n.sigma_omega, n.sigma_eta, n.sigma_gyro, n.sigma_gnss, n.sigma_zupt}) {
    if (!(s > 0.0)) throw ConfigError("noise sigmas must be positive");
  }
  vehicle.validate();
  effective_battery().validate();
  if (detector_enabled) detector.validate();
}

namespace {

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + where + "." + it.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <int N>
void read_vec(const json& j, const char* key, Eigen::Matrix<double, N, 1>& out) {
  if (!j.contains(key)) return;
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != static_cast<std::size_t>(N)) {
    throw ConfigError(std::string("'") + key + "' must be an array of " + std::to_string(N));
  }
  for (int i = 0; i < N; ++i) {
    if (!a[i].is_number()) throw ConfigError(std::string("'") + key + "' must hold numbers");
    out(i) = a[i].get<double>();
  }
}

template <int N>
json vec_json(const Eigen::Matrix<double, N, 1>& v) {
  json a = json::array();
  for (int i = 0; i < N; ++i) a.push_back(v(i));
  return a;
}

template <typename E>
E read_enum(const json& j, const char* key, E fallback,
            std::initializer_list<std::pair<const char*, E>> names) {
  if (!j.contains(key)) return fallback;
  const std::string s = j.at(key).get<std::string>();
  for (const auto& [name, value] : names) {
    if (s == name) return value;
  }
  throw ConfigError(std::string("bad value '") + s + "' for '" + key + "'");
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  reject_unknown(j, "config",
                 {"dt", "duration", "gamma", "seed", "x0", "vehicle", "noise", "battery",
                  "limits", "detector", "estimator", "disturbance", "tolerances", "divergence",
                  "log_every"});
  read(j, "dt", c.dt);
  read(j, "duration", c.duration);
  read(j, "gamma", c.gamma);
  read(j, "seed", c.seed);
  read(j, "log_every", c.log_every);

  if (j.contains("x0")) {
    const json& x = j.at("x0");
    reject_unknown(x, "x0", {"position", "velocity", "attitude_deg", "body_rates"});
    Vec3 v = c.x0.xi();
    read_vec<3>(x, "position", v);
    c.x0.xi() = v;
    v = c.x0.v();
    read_vec<3>(x, "velocity", v);
    c.x0.v() = v;
    v = c.x0.eta() * (180.0 / kPi);
    read_vec<3>(x, "attitude_deg", v);
    c.x0.eta() = v * (kPi / 180.0);
    v = c.x0.omega();
    read_vec<3>(x, "body_rates", v);
    c.x0.omega() = v;
  }

  if (j.contains("vehicle")) {
    const json& v = j.at("vehicle");
    reject_unknown(v, "vehicle",
                   {"mass", "inertia", "arm", "k_thrust", "k_torque", "gravity", "air_density",
                    "rotor_area", "c_thrust", "c_torque", "blade_radius", "rotor_efficiency",
                    "tau_rotor"});
    auto& p = c.vehicle;
    read(v, "mass", p.mass);
    read_vec<3>(v, "inertia", p.inertia);
    read(v, "arm", p.arm);
    read(v, "k_thrust", p.k_thrust);
    read(v, "k_torque", p.k_torque);
    read(v, "gravity", p.gravity);
    read(v, "air_density", p.air_density);
    read(v, "rotor_area", p.rotor_area);
    read(v, "c_thrust", p.c_thrust);
    read(v, "c_torque", p.c_torque);
    read(v, "blade_radius", p.blade_radius);
    read(v, "rotor_efficiency", p.rotor_efficiency);
    read(v, "tau_rotor", p.tau_rotor);
  }
  c.tolerances = BrysonTolerances::for_vehicle(c.vehicle);

  if (j.contains("noise")) {
    const json& n = j.at("noise");
    reject_unknown(n, "noise",
                   {"sigma_f", "sigma_omega", "sigma_eta", "sigma_gyro", "sigma_gnss",
                    "sigma_zupt", "inject"});
    read(n, "inject", c.inject_noise);
    read(n, "sigma_f", c.noise.sigma_f);
    read(n, "sigma_omega", c.noise.sigma_omega);
    read(n, "sigma_eta", c.noise.sigma_eta);
    read(n, "sigma_gyro", c.noise.sigma_gyro);
    read(n, "sigma_gnss", c.noise.sigma_gnss);
    read(n, "sigma_zupt", c.noise.sigma_zupt);
  }

  if (j.contains("battery")) {
    const json& b = j.at("battery");
    reject_unknown(b, "battery",
                   {"enabled", "capacity_ah", "r0", "r1", "c1", "nu", "v_nom", "soc_floor",
                    "resistance_unit"});
    read(b, "enabled", c.battery_enabled);
    read(b, "capacity_ah", c.battery.capacity_ah);
    read(b, "r0", c.battery.r0);
    read(b, "r1", c.battery.r1);
    read(b, "c1", c.battery.c1);
    read_vec<3>(b, "nu", c.battery.nu);
    read(b, "v_nom", c.battery.v_nom);
    read(b, "soc_floor", c.battery.soc_floor);
    c.resistances_in_milliohm =
        read_enum(b, "resistance_unit", false, {{"ohm", false}, {"milliohm", true}});
  }

  if (j.contains("limits")) {
    const json& l = j.at("limits");
    reject_unknown(l, "limits", {"min_ratio", "max_ratio"});
    read(l, "min_ratio", c.omega_min_ratio);
    read(l, "max_ratio", c.omega_max_ratio);
  }

  if (j.contains("detector")) {
    const json& d = j.at("detector");
    reject_unknown(d, "detector",
                   {"enabled", "preset", "delta_f", "delta_v", "window", "force_statistic",
                    "rate_limit"});
    read(d, "enabled", c.detector_enabled);
    if (d.contains("preset")) c.detector = DetectorConfig::preset(d.at("preset").get<std::string>());
    read(d, "delta_f", c.detector.delta_f);
    read(d, "delta_v", c.detector.delta_v);
    read(d, "window", c.detector.window);
    read(d, "rate_limit", c.detector.rate_limit);
    c.detector.force_statistic =
        read_enum(d, "force_statistic", c.detector.force_statistic,
                  {{"compensated", ForceStatistic::GravityCompensated},
                   {"raw_norm", ForceStatistic::RawNorm}});
  }
  c.detector.sigma_zupt = c.noise.sigma_zupt;
  c.detector.gravity = c.vehicle.gravity;

  if (j.contains("estimator")) {
    const json& e = j.at("estimator");
    reject_unknown(e, "estimator",
                   {"gain_mode", "attitude_aiding", "synthesis_noise", "position_hold",
                    "p0_sigma", "initial_estimate", "predict_input"});
    auto& es = c.estimator;
    es.gain_mode = read_enum(e, "gain_mode", es.gain_mode,
                             {{"frozen", GainMode::Frozen}, {"live", GainMode::Live}});
    read(e, "attitude_aiding", es.attitude_aiding);
    es.synthesis_noise =
        read_enum(e, "synthesis_noise", es.synthesis_noise,
                  {{"scaled", NoiseInterpretation::Scaled},
                   {"verbatim", NoiseInterpretation::Verbatim}});
    read(e, "position_hold", es.position_hold);
    read_vec<4>(e, "p0_sigma", es.p0_sigma);
    es.initial_estimate = read_enum(e, "initial_estimate", es.initial_estimate,
                                    {{"sampled", InitialEstimate::Sampled},
                                     {"truth", InitialEstimate::Truth},
                                     {"equilibrium", InitialEstimate::Equilibrium}});
    es.predict_input = read_enum(e, "predict_input", es.predict_input,
                                 {{"command", PredictInput::Command},
                                  {"applied", PredictInput::Applied}});
  }

  if (j.contains("disturbance")) {
    const json& d = j.at("disturbance");
    reject_unknown(d, "disturbance", {"scale"});
    read_vec<4>(d, "scale", c.disturbance.scale);
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t, "tolerances",
                   {"position", "velocity", "attitude", "body_rate", "thrust", "torque"});
    read(t, "position", c.tolerances.position);
    read(t, "velocity", c.tolerances.velocity);
    read(t, "attitude", c.tolerances.attitude);
    read(t, "body_rate", c.tolerances.body_rate);
    read(t, "thrust", c.tolerances.thrust);
    read_vec<3>(t, "torque", c.tolerances.torque);
  }

  if (j.contains("divergence")) {
    const json& d = j.at("divergence");
    reject_unknown(d, "divergence", {"attitude_rad", "state_norm"});
    read(d, "attitude_rad", c.divergence_attitude);
    read(d, "state_norm", c.divergence_norm);
  }

  c.validate();
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["dt"] = c.dt;
  j["duration"] = c.duration;
  j["gamma"] = c.gamma;
  j["seed"] = c.seed;
  j["log_every"] = c.log_every;
  j["x0"] = {{"position", vec_json<3>(c.x0.xi())},
             {"velocity", vec_json<3>(c.x0.v())},
             {"attitude_deg", vec_json<3>(Vec3(c.x0.eta() * (180.0 / kPi)))},
             {"body_rates", vec_json<3>(c.x0.omega())}};
  const auto& p = c.vehicle;
  j["vehicle"] = {{"mass", p.mass},
                  {"inertia", vec_json<3>(p.inertia)},
                  {"arm", p.arm},
                  {"k_thrust", p.k_thrust},
                  {"k_torque", p.k_torque},
                  {"gravity", p.gravity},
                  {"air_density", p.air_density},
                  {"rotor_area", p.rotor_area},
                  {"c_thrust", p.c_thrust},
                  {"c_torque", p.c_torque},
                  {"blade_radius", p.blade_radius},
                  {"rotor_efficiency", p.rotor_efficiency},
                  {"tau_rotor", p.tau_rotor}};
  j["noise"] = {{"sigma_f", c.noise.sigma_f},       {"sigma_omega", c.noise.sigma_omega},
                {"sigma_eta", c.noise.sigma_eta},   {"sigma_gyro", c.noise.sigma_gyro},
                {"sigma_gnss", c.noise.sigma_gnss}, {"sigma_zupt", c.noise.sigma_zupt},
                {"inject", c.inject_noise}};
  j["battery"] = {{"enabled", c.battery_enabled},
                  {"capacity_ah", c.battery.capacity_ah},
                  {"r0", c.battery.r0},
                  {"r1", c.battery.r1},
                  {"c1", c.battery.c1},
                  {"nu", vec_json<3>(c.battery.nu)},
                  {"v_nom", c.battery.v_nom},
                  {"soc_floor", c.battery.soc_floor},
                  {"resistance_unit", c.resistances_in_milliohm ? "milliohm" : "ohm"}};
  j["limits"] = {{"min_ratio", c.omega_min_ratio}, {"max_ratio", c.omega_max_ratio}};
  j["detector"] = {
      {"enabled", c.detector_enabled},
      {"delta_f", c.detector.delta_f},
      {"delta_v", c.detector.delta_v},
      {"window", c.detector.window},
      {"rate_limit", c.detector.rate_limit},
      {"force_statistic", c.detector.force_statistic == ForceStatistic::GravityCompensated
                              ? "compensated"
                              : "raw_norm"}};
  const auto& e = c.estimator;
  j["estimator"] = {
      {"gain_mode", e.gain_mode == GainMode::Frozen ? "frozen" : "live"},
      {"attitude_aiding", e.attitude_aiding},
      {"synthesis_noise", e.synthesis_noise == NoiseInterpretation::Scaled ? "scaled" : "verbatim"},
      {"position_hold", e.position_hold},
      {"p0_sigma", vec_json<4>(e.p0_sigma)},
      {"initial_estimate", e.initial_estimate == InitialEstimate::Sampled ? "sampled"
                           : e.initial_estimate == InitialEstimate::Truth ? "truth"
                                                                          : "equilibrium"},
      {"predict_input", e.predict_input == PredictInput::Command ? "command" : "applied"}};
  j["disturbance"] = {{"scale", vec_json<4>(c.disturbance.scale)}};
  j["tolerances"] = {{"position", c.tolerances.position},
                     {"velocity", c.tolerances.velocity},
                     {"attitude", c.tolerances.attitude},
                     {"body_rate", c.tolerances.body_rate},
                     {"thrust", c.tolerances.thrust},
                     {"torque", vec_json<3>(c.tolerances.torque)}};
  j["divergence"] = {{"attitude_rad", c.divergence_attitude}, {"state_norm", c.divergence_norm}};
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return config_from_json(j);
}

}  // namespace czupt
