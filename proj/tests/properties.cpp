#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "czupt/actuation.hpp"
#include "czupt/battery.hpp"
#include "czupt/simulation.hpp"
#include "czupt/zupt.hpp"

namespace czupt::props {

namespace {

double min_eig(const Mat12& p) {
  return Eigen::SelfAdjointEigenSolver<Mat12>(symmetrize(p), Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

}  // namespace

Outcome covariance_psd(long cycles, std::uint64_t seed) {
  const ScenarioConfig cfg;
  const LqgDesign d = design_lqg(cfg);
  const MeasurementSet ar{MeasurementKind::Attitude, MeasurementKind::BodyRates};
  const MeasurementSet pos{MeasurementKind::Position};
  const MeasurementSet vel{MeasurementKind::Velocity};
  const MeasMatrix c_ar = measurement_matrix(ar), c_pos = measurement_matrix(pos),
                   c_vel = measurement_matrix(vel);
  const MatX v_ar = measurement_covariance(ar, cfg.noise), v_pos = measurement_covariance(pos, cfg.noise),
             v_vel = measurement_covariance(vel, cfg.noise);
  const MatX l_pos = d.L_d.leftCols(3) * 200.0, l_ar = d.L_d.rightCols(6);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 499);
  FilterState fs;
  fs.P = cfg.estimator.initial_covariance();
  double worst = min_eig(fs.P);
  for (long k = 0; k < cycles; ++k) {
    // First half with optimal gains, second half with the fixed gains.
    const bool frozen = k >= cycles / 2;
    fs = kf_predict(fs, Vec4::Zero(), d.Ad, d.Bd, d.Wd);
    if (frozen) {
      covariance_update_with_gain(fs.P, c_ar, v_ar, l_ar);
    } else {
      covariance_update(fs.P, c_ar, v_ar);
    }
    if ((k + 1) % 200 == 0) {
      if (frozen) {
        covariance_update_with_gain(fs.P, c_pos, v_pos, l_pos);
      } else {
        covariance_update(fs.P, c_pos, v_pos);
      }
    }
    if (coin(rng) == 0) covariance_update(fs.P, c_vel, v_vel);
    if (k % 100 == 99 || k + 1 == cycles) worst = std::min(worst, min_eig(fs.P));
  }
  const bool sym = (fs.P - fs.P.transpose()).norm() <= 1e-12 * fs.P.norm();
  return {worst > -1e-12 && sym, worst, -1e-12,
          std::to_string(cycles) + " cycles, final trace " + std::to_string(fs.P.trace())};
}

Outcome zeta_sawtooth() {
  // The attitude channel is updated every step too; its P0 transient pulls
  // the trace down during the first second, so checks start after that.
  constexpr double kSettle = 1.0;
  struct Case {
    double gamma;
    GainMode mode;
  };
  long drops = 0, fixes = 0, violations = 0;
  double worst = 0.0;
  bool diverged = false;
  for (const Case& cs : {Case{0.05, GainMode::Live}, Case{0.005, GainMode::Live},
                         Case{0.05, GainMode::Frozen}}) {
    ScenarioConfig cfg;
    cfg.gamma = cs.gamma;
    cfg.estimator.gain_mode = cs.mode;
    const SimResult r = run_closed_loop(cfg, RunOptions{false, true});
    diverged = diverged || r.metrics.diverged;
    // zeta[k] is the trace entering step k, so zeta[k + 1] follows the
    // update applied in step k.
    const std::vector<double>& z = r.metrics.zeta;
    const long period = cfg.update_period();
    const auto first = static_cast<std::size_t>(std::lround(kSettle / cfg.dt));
    for (std::size_t k = first; k + 1 < z.size(); ++k) {
      const double step = (z[k + 1] - z[k]) / z[k];
      if ((static_cast<long>(k) + 1) % period == 0) {
        ++fixes;
        if (step < 0.0) ++drops;
      } else {
        worst = std::min(worst, step);
        if (step < -1e-12) ++violations;
      }
    }
  }
  const bool ok = !diverged && fixes > 0 && drops == fixes && violations == 0;
  return {ok, worst, -1e-12,
          std::to_string(drops) + "/" + std::to_string(fixes) + " fixes drop, " +
              std::to_string(violations) + " decreases between fixes"};
}

Outcome nnls_kkt(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> f(-2.0, 25.0), t(-0.5, 0.5), tz(-0.05, 0.05);
  const Mat4 mix = mixer_matrix(VehicleParams{});
  double worst = 0.0;
  bool nonneg = true;
  for (int k = 0; k < samples; ++k) {
    Mat4 m;
    Vec4 b;
    if (k % 2 == 0) {
      m = mix;
      b = Vec4(f(rng), t(rng), t(rng), tz(rng));
    } else {
      for (int i = 0; i < 16; ++i) m.data()[i] = g(rng);
      b = Vec4(g(rng), g(rng), g(rng), g(rng));
    }
    const Vec4 x = nnls(m, b).x;
    nonneg = nonneg && (x.array() >= 0.0).all();
    // Gradient scale of the problem at x.
    const double scale = m.norm() * (m.norm() * x.norm() + b.norm()) + 1e-300;
    worst = std::max(worst, nnls_kkt_violation(m, b, x) / scale);
  }
  return {nonneg && worst < 1e-9, worst, 1e-9, std::to_string(samples) + " problems"};
}

Outcome detector_threshold_monotone(int traces, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> grow(1.0, 3.0);
  std::uniform_int_distribution<int> win(1, 80);
  long lost = 0, detections = 0;
  for (int trial = 0; trial < traces; ++trial) {
    DetectorConfig a;
    a.window = win(rng);
    a.delta_f = 0.1 + 0.2 * std::abs(g(rng));
    a.delta_v = 0.02 + 0.05 * std::abs(g(rng));
    DetectorConfig b = a;
    b.delta_f *= grow(rng);
    if (trial % 3 != 0) b.delta_v *= grow(rng);
    DetectorState sa(a.window), sb(b.window);
    double drift = 0.0;
    for (int k = 0; k < 600; ++k) {
      drift = 0.98 * drift + 0.01 * g(rng);
      const Vec3 f = Vec3(0.0, 0.0, 9.81) + 0.3 * Vec3(g(rng), g(rng), g(rng));
      const Vec3 v(drift, 0.02 * g(rng), 0.01 * g(rng));
      const Vec3 eta = 0.05 * Vec3(g(rng), g(rng), 0.0);
      const bool da = detector_step(sa, f, v, eta, a).stationary;
      const bool db = detector_step(sb, f, v, eta, b).stationary;
      detections += da;
      if (da && !db) ++lost;
    }
  }
  return {lost == 0 && detections > 0, static_cast<double>(lost), 0.0,
          std::to_string(detections) + " detections replayed"};
}

Outcome battery_bookkeeping(std::uint64_t seed) {
  const BatteryParams p;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> load(40.0, 150.0);
  const double dt = 0.1;
  BatteryState s = BatteryState::full(p);
  double charge = 0.0, pw = load(rng), worst_dae = 0.0;
  bool monotone = true;
  long k = 0;
  while (s.soc > p.soc_floor) {
    if (k++ % 600 == 0) pw = load(rng);
    const BatteryState n = dae_step(s, pw, p, dt);
    worst_dae = std::max(worst_dae, std::abs(n.v_term * n.i_draw - pw) / std::max(pw, 1.0));
    monotone = monotone && n.soc <= s.soc;
    charge += n.i_draw * dt / 3600.0;
    s = n;
  }
  const double expect = p.capacity_ah * (1.0 - s.soc);
  const double rel = std::abs(charge - expect) / expect;
  return {rel < 1e-3 && monotone && worst_dae < 1e-8, rel, 1e-3,
          "max DAE power residual " + std::to_string(worst_dae)};
}

}  // namespace czupt::props
