#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "czupt/config.hpp"
#include "czupt/errors.hpp"

using namespace czupt;
using nlohmann::json;

TEST(Config, DefaultsValidate) {
  const ScenarioConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.update_period(), 1);
  EXPECT_EQ(c.steps(), 10000);
}

TEST(Config, UpdatePeriodRounds) {
  ScenarioConfig c;
  c.gamma = 0.005;
  EXPECT_EQ(c.update_period(), 200);
  c.gamma = 0.3;
  EXPECT_EQ(c.update_period(), 3);
}

TEST(Config, JsonRoundTrip) {
  ScenarioConfig c;
  c.gamma = 0.05;
  c.seed = 77;
  c.detector_enabled = true;
  c.detector = DetectorConfig::permissive();
  c.estimator.gain_mode = GainMode::Live;
  c.estimator.initial_estimate = InitialEstimate::Truth;
  c.disturbance.scale = Vec4(0.5, 1.0, 2.0, 0.0);
  c.resistances_in_milliohm = true;
  c.battery.r0 = 40.0;
  c.battery.r1 = 20.0;
  c.inject_noise = false;

  const ScenarioConfig d = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(d), config_to_json(c));
  EXPECT_EQ(d.seed, 77u);
  EXPECT_EQ(d.detector.window, 200);
  EXPECT_EQ(d.estimator.gain_mode, GainMode::Live);
  EXPECT_FALSE(d.inject_noise);
  EXPECT_LT((d.x0.data - c.x0.data).norm(), 1e-15);
}

TEST(Config, PartialJsonKeepsDefaults) {
  const ScenarioConfig c = config_from_json(json{{"gamma", 0.01}, {"detector", {{"preset", "strict"}}}});
  EXPECT_DOUBLE_EQ(c.gamma, 0.01);
  EXPECT_DOUBLE_EQ(c.dt, 0.001);
  EXPECT_EQ(c.detector.window, 50);
  EXPECT_DOUBLE_EQ(c.vehicle.mass, VehicleParams{}.mass);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(config_from_json(json{{"gama", 0.5}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"vehicle", {{"mas", 1.0}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"estimator", {{"gain_mode", "adaptive"}}}}), ConfigError);
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(config_from_json(json{{"gamma", 0.0}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"gamma", 1.5}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"dt", -1e-3}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"gamma", "fast"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"x0", {{"position", {1.0, 2.0}}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"limits", {{"min_ratio", 2.0}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"noise", {{"sigma_gnss", 0.0}}}}), ConfigError);
}

TEST(Config, LoadFromFile) {
  const std::string path = ::testing::TempDir() + "czupt_cfg.json";
  {
    std::ofstream out(path);
    out << R"({"gamma": 0.5, "seed": 3})";
  }
  const ScenarioConfig c = load_config(path);
  EXPECT_EQ(c.update_period(), 2);
  EXPECT_EQ(c.seed, 3u);
  std::remove(path.c_str());
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(Config, MilliohmBatteryIsConverted) {
  ScenarioConfig c;
  c.battery.r0 = 40.0;
  c.battery.r1 = 20.0;
  c.resistances_in_milliohm = true;
  EXPECT_DOUBLE_EQ(c.effective_battery().r0, 0.04);
  EXPECT_DOUBLE_EQ(c.effective_battery().eta_rot, c.vehicle.rotor_efficiency);
}
