#pragma once

#include <vector>

#include "czupt/simulation.hpp"

namespace czupt {

/// Runs every config and returns metrics in input order. The parallel
/// variant distributes runs over OpenMP threads; results are identical to
/// the serial reference.
std::vector<MetricsReport> run_batch_serial(const std::vector<ScenarioConfig>& cfgs,
                                            const LqgDesign& design);
std::vector<MetricsReport> run_batch_parallel(const std::vector<ScenarioConfig>& cfgs,
                                              const LqgDesign& design);

struct GammaRow {
  double gamma = 1.0;
  bool czupt = false;
  int runs = 0;
  double err_pos_median = 0.0;  // m
  double err_att_median = 0.0;  // deg
  double u_sat_median = 0.0;
  double u_tot_median = 0.0;
  double zeta_ss_mean = 0.0;    // mean over runs of the steady-state mean
  double zeta_ss_std = 0.0;     // mean over runs of the steady-state std
  double diverged_fraction = 0.0;
  double power_avg = 0.0;       // mean over runs, W
  double current_avg = 0.0;     // mean over runs, A
  std::vector<MetricsReport> reports;
};

struct GammaRatio {
  double gamma = 1.0;
  double err_pos = 1.0;
  double err_att = 1.0;
  double u_sat = 1.0;
  double u_tot = 1.0;
  double zeta_ss = 1.0;
};

struct SweepResult {
  std::vector<GammaRow> unaided;
  std::vector<GammaRow> aided;
  std::vector<GammaRatio> ratios;  // aided / unaided, paired seeds
};

struct SweepOptions {
  int seeds = 10;
  std::uint64_t first_seed = 1;
  bool run_unaided = true;
  bool run_aided = false;
  bool parallel = true;
};

/// Monte-Carlo sweep over gamma. Seeds first_seed .. first_seed+seeds-1
/// are shared by both variants.
SweepResult sweep_gamma(const ScenarioConfig& base, const std::vector<double>& gammas,
                        const SweepOptions& opt);

struct EnduranceRow {
  double gamma = 1.0;
  bool czupt = false;
  double power_avg = 0.0;   // W
  double current_avg = 0.0; // A
  double t_safe = 0.0;      // min
  double eta_eff = 0.0;     // min / Wh
};

struct EnduranceComparison {
  std::vector<EnduranceRow> baseline;
  std::vector<EnduranceRow> aided;
  std::vector<double> power_reduction_pct;
  std::vector<double> current_reduction_pct;
  std::vector<double> t_safe_gain_min;
};

/// Average closed-loop power per gamma for both variants, then the time to
/// the SoC floor at that constant power (coarse `endurance_dt`).
EnduranceComparison endurance_comparison(const ScenarioConfig& base,
                                         const std::vector<double>& gammas,
                                         const SweepOptions& opt, double endurance_dt = 0.1);

}  // namespace czupt
