#pragma once

#include <string>
#include <vector>

#include "czupt/actuation.hpp"
#include "czupt/config.hpp"
#include "czupt/metrics.hpp"

namespace czupt {

/// Model matrices and steady-state gains shared by every run of a scenario
/// family (they do not depend on gamma or the seed).
struct LqgDesign {
  EquilibriumPoint eq;
  Mat12 A;
  Mat12x4 B;
  Mat12 Ad;
  Mat12x4 Bd;
  Mat12 Wd;
  CostWeights weights;
  GainSet gains;
  MeasMatrix C_syn;  // sensor stack used for the filter gain
  MatX L_d;          // discrete steady-state gain applied by the frozen filter
  Mat4 mixer;
  ActuatorLimits limits;
  double care_residual_control = 0.0;
  double care_residual_filter = 0.0;
};

/// Builds the hover model and synthesizes K and L from the continuous
/// Riccati equations.
LqgDesign design_lqg(const ScenarioConfig& cfg);

struct TraceRecord {
  double t = 0.0;
  Vec12 x;
  Vec12 x_hat;
  double trace_p = 0.0;
  Vec4 u_lqr;
  Vec4 omega_des;
  Vec4 omega_in;
  Vec4 omega_cmd;
  Vec4 omega_out;
  Vec4 u_out;
  bool zupt = false;
  bool pos_update = false;
  bool saturated = false;
  double soc = 1.0;
  double v_oc = 0.0;
  double v_term = 0.0;
  double i_draw = 0.0;
  double p_elec = 0.0;
};

struct SimTrace {
  std::vector<TraceRecord> records;
};

struct MetricsReport {
  double u_sat_frac = 0.0;        // rotor speeds outside their limits
  double u_sat_input_frac = 0.0;  // |u_lqr - u_e| beyond the Bryson tolerance
  double u_tot = 0.0;
  std::vector<double> zeta;       // one entry per step, starting at 1
  MeanStd zeta_ss;
  double err_pos_final = 0.0;     // m
  double err_att_final = 0.0;     // deg
  std::vector<Vec4> est_err;      // ||x - x_hat|| per state block, per step
  bool diverged = false;
  std::string divergence_reason;
  long steps_completed = 0;
  long zupt_count = 0;
  long detections = 0;
  long position_updates = 0;
  double power_avg = 0.0;    // W
  double current_avg = 0.0;  // A
  double final_soc = 1.0;
};

struct SimResult {
  SimTrace trace;
  MetricsReport metrics;
};

struct RunOptions {
  bool keep_trace = true;
  bool keep_series = true;  // zeta and est_err series
};

/// One closed-loop run. Deterministic for a given config and seed. A
/// diverged run stops early with `metrics.diverged` set and infinite final
/// errors.
SimResult run_closed_loop(const ScenarioConfig& cfg, const LqgDesign& design,
                          const RunOptions& opt = {});
SimResult run_closed_loop(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Per-component standard deviation of the plant disturbance increment.
Vec12 disturbance_sigma(const ScenarioConfig& cfg);

/// Normalization used for the effort metric: (m g, torque tolerances).
Vec4 effort_scale(const ScenarioConfig& cfg);

}  // namespace czupt
