// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "czupt/battery.hpp"
#include "czupt/linmodel.hpp"
#include "czupt/lqg.hpp"
#include "czupt/simulation.hpp"
#include "czupt/sweep.hpp"
#include "properties.hpp"

using namespace czupt;

namespace {

// Pinned tolerances.
constexpr double kRpmTarget = 5921.0, kRpmTol = 0.02;
constexpr double kPowerTarget = 78.55, kCurrentTarget = 5.31, kPowerTol = 0.02;
constexpr double kNominalVoltage = 14.8;
constexpr double kIdealMin = 33.6, kSafeMin = 23.5, kEnduranceTol = 0.05;
constexpr double kOcvFull = 16.8, kOcvFloor = 15.26, kOcvTol = 0.01;
constexpr int kRankPosition = 10, kRankVelocity = 7;
constexpr double kJacobianTol = 1e-4;
constexpr double kRiccatiTol = 1e-8, kUnionTol = 1e-8;
constexpr double kPosErrMax = 0.1, kAttErrMaxDeg = 3.0;
constexpr double kDivergedMin = 0.7;
constexpr double kErrRatioMax = 0.9, kEffortRatioMax = 0.9, kZetaRatioMax = 0.95;
constexpr double kPowerCutMin = 2.0, kPowerCutMax = 12.0, kSafeGainMin = 0.3;
constexpr int kSeeds = 10;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  %2d  %-30s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool within(double v, double target, double rel) { return std::abs(v - target) <= rel * target; }

bool non_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v, const char* f) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt::format(fmt::runtime(f), x);
  return s;
}

}  // namespace

int main() {
  const ScenarioConfig base;
  const VehicleParams& vp = base.vehicle;
  const BatteryParams bp = base.effective_battery();

  // 1
  const double rpm = rad_per_s_to_rpm(hover_rotor_speed(vp));
  report(1, "hover rotor speed", within(rpm, kRpmTarget, kRpmTol),
         fmt::format("{:.1f} rpm, target {} +/- {:.0f}%", rpm, kRpmTarget, 100 * kRpmTol));

  // 2
  const double p_hover = electrical_power(RotorSpeeds::uniform(hover_rotor_speed(vp)), bp, vp);
  const double i_hover = p_hover / kNominalVoltage;
  report(2, "hover power and current",
         within(p_hover, kPowerTarget, kPowerTol) && within(i_hover, kCurrentTarget, kPowerTol),
         fmt::format("{:.2f} W (target {}), {:.3f} A at {} V (target {}), +/- {:.0f}%", p_hover,
                     kPowerTarget, i_hover, kNominalVoltage, kCurrentTarget, 100 * kPowerTol));

  // 3
  const EnduranceResult ideal = endurance(p_hover, bp, 0.0, 0.1);
  const EnduranceResult safe = endurance(p_hover, bp, 0.3, 0.1);
  const double v_full = ocv(1.0, bp), v_floor = ocv(0.3, bp);
  const bool ok3 = ideal.reached && safe.reached && within(ideal.minutes, kIdealMin, kEnduranceTol) &&
                   within(safe.minutes, kSafeMin, kEnduranceTol) &&
                   std::abs(v_full - kOcvFull) <= kOcvTol && std::abs(v_floor - kOcvFloor) <= kOcvTol;
  report(3, "hover endurance", ok3,
         fmt::format("SoC 0 at {:.2f} min (target {}), SoC 0.3 at {:.2f} min (target {}), "
                     "+/- {:.0f}%; OCV {:.3f} / {:.3f} V",
                     ideal.minutes, kIdealMin, safe.minutes, kSafeMin, 100 * kEnduranceTol, v_full,
                     v_floor));

  // 4
  const EquilibriumPoint eq = EquilibriumPoint::hover(vp);
  const Jacobians jac = linearize_hover(vp, eq);
  const int r_pos = observability_rank(jac.A, measurement_matrix({MeasurementKind::Position}));
  const int r_vel = observability_rank(jac.A, measurement_matrix({MeasurementKind::Velocity}));
  report(4, "observability ranks", r_pos == kRankPosition && r_vel == kRankVelocity,
         fmt::format("position {}, velocity {}", r_pos, r_vel));

  // 5
  const Jacobians fd = finite_difference_jacobians(vp, eq);
  const double da = (fd.A - jac.A).cwiseAbs().maxCoeff();
  const double db = (fd.B - jac.B).cwiseAbs().maxCoeff();
  report(5, "linearization oracle", da <= kJacobianTol && db <= kJacobianTol,
         fmt::format("max |dA| {:.2e}, max |dB| {:.2e}, bound {:.0e}", da, db, kJacobianTol));

  // 6
  const LqgDesign design = design_lqg(base);
  const SeparationReport sep =
      separation_check(design.A, design.B, design.C_syn, design.gains.K, design.gains.L);
  const bool ok6 = design.care_residual_control < kRiccatiTol &&
                   design.care_residual_filter < kRiccatiTol && sep.controller_hurwitz &&
                   sep.estimator_hurwitz && sep.union_mismatch < kUnionTol;
  report(6, "Riccati and separation", ok6,
         fmt::format("residuals {:.1e} / {:.1e}, max Re {:.3f}, union mismatch {:.1e}",
                     design.care_residual_control, design.care_residual_filter, sep.max_real,
                     sep.union_mismatch));

  // 7 and 8 share the unaided sweep.
  SweepOptions opt;
  opt.seeds = kSeeds;
  const std::vector<double> trend{1.0, 0.05, 0.01, 0.005};
  std::vector<double> gammas = trend;
  gammas.push_back(0.001);
  const SweepResult sw = sweep_gamma(base, gammas, opt);
  const GammaRow& g1 = sw.unaided.front();
  report(7, "closed loop at full rate",
         g1.err_pos_median < kPosErrMax && g1.err_att_median < kAttErrMaxDeg,
         fmt::format("median pos {:.3f} m (< {}), att {:.3f} deg (< {}), {} seeds",
                     g1.err_pos_median, kPosErrMax, g1.err_att_median, kAttErrMaxDeg, g1.runs));

  std::vector<double> pos, eff, zeta;
  for (std::size_t i = 0; i < trend.size(); ++i) {
    pos.push_back(sw.unaided[i].err_pos_median);
    eff.push_back(sw.unaided[i].u_tot_median);
    zeta.push_back(sw.unaided[i].zeta_ss_mean);
  }
  const double div = sw.unaided.back().diverged_fraction;
  report(8, "degradation with sparse fixes",
         non_decreasing(pos) && non_decreasing(eff) && non_decreasing(zeta) && div >= kDivergedMin,
         fmt::format("pos [{}] m, u_tot [{}], zeta_ss [{}], diverged at 0.001: {:.0f}%",
                     join(pos, "{:.3f}"), join(eff, "{:.3f}"), join(zeta, "{:.2f}"), 100 * div));

  // 9
  SweepOptions paired = opt;
  paired.run_aided = true;
  const SweepResult zs = sweep_gamma(base, {0.005}, paired);
  const GammaRatio& q = zs.ratios.front();
  report(9, "paired zero-velocity benefit",
         q.err_pos < kErrRatioMax && q.u_tot < kEffortRatioMax && q.zeta_ss < kZetaRatioMax,
         fmt::format("ratios pos {:.3f} (< {}), effort {:.3f} (< {}), zeta_ss {:.3f} (< {}); "
                     "{} triggers in {} runs",
                     q.err_pos, kErrRatioMax, q.u_tot, kEffortRatioMax, q.zeta_ss, kZetaRatioMax,
                     [&] {
                       long n = 0;
                       for (const auto& m : zs.aided.front().reports) n += m.zupt_count;
                       return n;
                     }(),
                     zs.aided.front().runs));

  // 10
  const EnduranceComparison ec = endurance_comparison(base, {0.05, 0.005}, paired);
  bool ok10 = true;
  for (std::size_t i = 0; i < ec.power_reduction_pct.size(); ++i) {
    ok10 = ok10 && ec.power_reduction_pct[i] >= kPowerCutMin &&
           ec.power_reduction_pct[i] <= kPowerCutMax && ec.t_safe_gain_min[i] > kSafeGainMin;
  }
  report(10, "power and endurance benefit", ok10,
         fmt::format("power cut [{}] % (band {}-{}), t_safe gain [{}] min (> {})",
                     join(ec.power_reduction_pct, "{:.2f}"), kPowerCutMin, kPowerCutMax,
                     join(ec.t_safe_gain_min, "{:.3f}"), kSafeGainMin));

  // 11
  const props::Outcome psd = props::covariance_psd(1000000);
  const props::Outcome saw = props::zeta_sawtooth();
  const props::Outcome kkt = props::nnls_kkt(10000);
  const props::Outcome mono = props::detector_threshold_monotone(200);
  const props::Outcome bat = props::battery_bookkeeping();
  report(11, "property suites", psd.pass && saw.pass && kkt.pass && mono.pass && bat.pass,
         fmt::format("psd {} (min eig {:.1e}), sawtooth {} ({}), kkt {} ({:.1e}), "
                     "detector {} ({}), battery {} ({:.1e})",
                     psd.pass, psd.worst, saw.pass, saw.detail, kkt.pass, kkt.worst, mono.pass,
                     mono.detail, bat.pass, bat.worst));

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
