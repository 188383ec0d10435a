// Command-line front end: simulate, sweep, endurance, linearize.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "czupt/battery.hpp"
#include "czupt/config.hpp"
#include "czupt/report.hpp"
#include "czupt/simulation.hpp"
#include "czupt/sweep.hpp"

namespace {

using namespace czupt;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDiverged = 2;
constexpr int kExitConfig = 3;

struct Overrides {
  std::string config_path;
  std::optional<double> gamma, duration, dt;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> preset, gain_mode;
  bool czupt = false;
  bool no_battery = false;
  bool milliohm = false;

  void add_to(CLI::App* app, bool with_gamma = true) {
    app->add_option("-c,--config", config_path, "JSON scenario file");
    if (with_gamma) app->add_option("-g,--gamma", gamma, "position update ratio in (0, 1]");
    app->add_option("--duration", duration, "simulated time [s]");
    app->add_option("--dt", dt, "integration step [s]");
    app->add_option("-s,--seed", seed, "RNG seed");
    app->add_option("--preset", preset, "detector preset: strict | permissive");
    app->add_option("--gain-mode", gain_mode, "estimator gain: frozen | live");
    app->add_flag("--czupt", czupt, "enable stationarity detection and ZUPT");
    app->add_flag("--no-battery", no_battery, "disable the battery model");
    app->add_flag("--milliohm", milliohm, "read R0/R1 as milliohm");
  }

  ScenarioConfig build() const {
    json j = config_path.empty() ? json::object() : [&] {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
      json parsed;
      try {
        in >> parsed;
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
      }
      return parsed;
    }();
    if (gamma) j["gamma"] = *gamma;
    if (duration) j["duration"] = *duration;
    if (dt) j["dt"] = *dt;
    if (seed) j["seed"] = *seed;
    if (preset) j["detector"]["preset"] = *preset;
    if (czupt) j["detector"]["enabled"] = true;
    if (gain_mode) j["estimator"]["gain_mode"] = *gain_mode;
    if (no_battery) j["battery"]["enabled"] = false;
    if (milliohm) j["battery"]["resistance_unit"] = "milliohm";
    return config_from_json(j);
  }
};

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

int cmd_simulate(const Overrides& o, const std::string& trace_path, const std::string& json_path,
                 bool series) {
  const ScenarioConfig cfg = o.build();
  const SimResult r = run_closed_loop(cfg);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw ConfigError("cannot write '" + trace_path + "'");
    write_trace_csv(out, r.trace);
  }
  json j = metrics_to_json(r.metrics, series);
  j["config"] = config_to_json(cfg);
  write_json(j, json_path);
  return r.metrics.diverged ? kExitDiverged : kExitOk;
}

SweepOptions sweep_options(int seeds, const std::string& variants, bool serial) {
  SweepOptions opt;
  opt.seeds = seeds;
  opt.parallel = !serial;
  if (variants == "off") {
    opt.run_unaided = true;
    opt.run_aided = false;
  } else if (variants == "on") {
    opt.run_unaided = false;
    opt.run_aided = true;
  } else if (variants == "both") {
    opt.run_unaided = opt.run_aided = true;
  } else {
    throw ConfigError("--variants must be off, on or both");
  }
  return opt;
}

int cmd_sweep(const Overrides& o, const std::vector<double>& gammas, int seeds,
              const std::string& variants, bool serial, const std::string& json_path,
              const std::string& csv_path) {
  const ScenarioConfig base = o.build();
  const SweepResult s = sweep_gamma(base, gammas, sweep_options(seeds, variants, serial));
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot write '" + csv_path + "'");
    write_sweep_csv(out, s);
  }
  write_json(sweep_to_json(s), json_path);
  return kExitOk;
}

int cmd_endurance(const Overrides& o, const std::vector<double>& gammas, int seeds, bool serial,
                  double coarse_dt, bool hover_only, const std::string& json_path) {
  const ScenarioConfig base = o.build();
  const BatteryParams bp = base.effective_battery();
  const double w_hov = hover_rotor_speed(base.vehicle);
  const double p_hov = electrical_power(RotorSpeeds::uniform(w_hov), bp, base.vehicle);
  const EnduranceResult ideal = endurance(p_hov, bp, 0.0, coarse_dt);
  const EnduranceResult safe = endurance(p_hov, bp, bp.soc_floor, coarse_dt);

  json j;
  j["hover"] = {{"rotor_speed_rad_s", w_hov},
                {"rotor_speed_rpm", rad_per_s_to_rpm(w_hov)},
                {"power_w", p_hov},
                {"current_at_v_nom_a", p_hov / bp.v_nom},
                {"ocv_full_v", ocv(1.0, bp)},
                {"ocv_floor_v", ocv(bp.soc_floor, bp)},
                {"t_ideal_min", ideal.minutes},
                {"t_safe_min", safe.minutes},
                {"eta_eff_min_per_wh", safe.eta_eff}};
  if (!hover_only) {
    j["closed_loop"] = endurance_to_json(
        endurance_comparison(base, gammas, sweep_options(seeds, "both", serial), coarse_dt));
  }
  write_json(j, json_path);
  return kExitOk;
}

int cmd_linearize(const Overrides& o, const std::string& json_path) {
  const ScenarioConfig cfg = o.build();
  write_json(design_to_json(design_lqg(cfg)), json_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrotor hover LQG simulator with controlled zero-velocity updates"};
  app.require_subcommand(1);

  Overrides sim_o, sweep_o, end_o, lin_o;
  std::string trace_path, sim_json, sweep_json, sweep_csv, end_json, lin_json;
  bool series = false, serial = false, hover_only = false;
  int seeds = 10;
  std::string variants = "off";
  std::vector<double> gammas{1.0, 0.05, 0.01, 0.005, 0.001};
  std::vector<double> end_gammas{0.5, 0.05, 0.005};
  double coarse_dt = 0.1;

  auto* sim = app.add_subcommand("simulate", "single closed-loop run");
  sim_o.add_to(sim);
  sim->add_option("--trace", trace_path, "CSV trace output");
  sim->add_option("-o,--json", sim_json, "metrics JSON output (default stdout)");
  sim->add_flag("--series", series, "include the uncertainty series in the JSON");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over gamma");
  sweep_o.add_to(sweep, false);
  sweep->add_option("--gammas", gammas, "gamma values")->delimiter(',');
  sweep->add_option("-n,--seeds", seeds, "seeds per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--variants", variants, "off | on | both");
  sweep->add_flag("--serial", serial, "run without OpenMP");
  sweep->add_option("-o,--json", sweep_json, "JSON output (default stdout)");
  sweep->add_option("--csv", sweep_csv, "CSV summary output");

  auto* end = app.add_subcommand("endurance", "hover power and flight-time tables");
  end_o.add_to(end, false);
  end->add_option("--gammas", end_gammas, "closed-loop gammas")->delimiter(',');
  end->add_flag("--hover-only", hover_only, "skip the closed-loop comparison");
  end->add_option("-n,--seeds", seeds, "seeds per cell")->check(CLI::PositiveNumber);
  end->add_option("--coarse-dt", coarse_dt, "discharge integration step [s]");
  end->add_flag("--serial", serial, "run without OpenMP");
  end->add_option("-o,--json", end_json, "JSON output (default stdout)");

  auto* lin = app.add_subcommand("linearize", "hover model, gains and ranks");
  lin_o.add_to(lin, false);
  lin->add_option("-o,--json", lin_json, "JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_o, trace_path, sim_json, series);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_o, gammas, seeds, variants, serial, sweep_json, sweep_csv);
    }
    if (end->parsed()) return cmd_endurance(end_o, end_gammas, seeds, serial, coarse_dt, hover_only, end_json);
    if (lin->parsed()) return cmd_linearize(lin_o, lin_json);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
