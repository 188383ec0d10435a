#include "czupt/simulation.hpp"

#include <cmath>
#include <random>

#include "czupt/battery.hpp"

namespace czupt {

Vec4 effort_scale(const ScenarioConfig& cfg) {
  return {cfg.vehicle.weight(), cfg.tolerances.torque(0), cfg.tolerances.torque(1),
          cfg.tolerances.torque(2)};
}

Vec12 disturbance_sigma(const ScenarioConfig& cfg) {
  const double sf = cfg.noise.sigma_f, sw = cfg.noise.sigma_omega, dt = cfg.dt;
  const Vec4 base(sf * std::sqrt(dt * dt * dt / 3.0), sf * std::sqrt(dt), sw * std::sqrt(dt),
                  sw * std::sqrt(dt));
  Vec12 out;
  for (int b = 0; b < 4; ++b) out.segment<3>(3 * b).setConstant(base(b) * std::sqrt(cfg.disturbance.scale(b)));
  return out;
}

LqgDesign design_lqg(const ScenarioConfig& cfg) {
  LqgDesign d;
  d.eq = EquilibriumPoint::hover(cfg.vehicle);
  const Jacobians jac = linearize_hover(cfg.vehicle, d.eq);
  d.A = jac.A;
  d.B = jac.B;
  std::tie(d.Ad, d.Bd) = discretize(d.A, d.B, cfg.dt);
  d.Wd = process_covariance(cfg.noise, cfg.dt);

  d.weights = bryson_weights(cfg.tolerances);
  const MatX s = solve_care(d.A, d.B, d.weights.Q, d.weights.R);
  d.gains.S = s;
  d.gains.K = lqr_gain(s, d.B, d.weights.R);
  d.care_residual_control = care_residual(d.A, d.B, d.weights.Q, d.weights.R, s);

  MeasurementSet sensors{MeasurementKind::Position};
  if (cfg.estimator.attitude_aiding) {
    sensors.add(MeasurementKind::Attitude).add(MeasurementKind::BodyRates);
  }
  d.gains.sensors = sensors;
  d.C_syn = measurement_matrix(sensors);
  const MatX vd = measurement_covariance(sensors, cfg.noise);
  const bool scaled = cfg.estimator.synthesis_noise == NoiseInterpretation::Scaled;
  const MatX wc = scaled ? MatX(d.Wd / cfg.dt) : MatX(d.Wd);
  const MatX vc = scaled ? MatX(vd * cfg.dt) : vd;
  try {
    const KalmanSolution ks = kalman_gain(d.A, d.C_syn, wc, vc);
    d.gains.L = ks.L;
    d.gains.P_ss = ks.P;
    d.care_residual_filter = care_residual(d.A.transpose(), d.C_syn.transpose(), wc, vc, ks.P);
    if (cfg.estimator.gain_mode == GainMode::Frozen) {
      d.L_d = discrete_kalman_gain(d.Ad, d.C_syn, d.Wd, vd).L;
    }
  } catch (const NotDetectable&) {
    // The live filter needs no steady-state gain.
    if (cfg.estimator.gain_mode == GainMode::Frozen) throw;
    d.gains.L.resize(12, 0);
    d.gains.P_ss.setZero();
  }

  d.mixer = mixer_matrix(cfg.vehicle);
  d.limits = ActuatorLimits::from_hover(cfg.vehicle, cfg.omega_min_ratio, cfg.omega_max_ratio);
  return d;
}

namespace {

class Gaussian {
 public:
  Gaussian(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    rng_.seed(seq);
  }
  double operator()() { return dist_(rng_); }
  Vec3 vec3(double sigma) { return Vec3((*this)(), (*this)(), (*this)()) * sigma; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
};

enum Stream : std::uint64_t { kPlant = 1, kImu = 2, kAttitude = 3, kGnss = 4, kInit = 5 };

// Deviation of an absolute state from the equilibrium, yaw wrapped.
Vec12 deviation(const Vec12& x, const Vec12& xe) {
  Vec12 d = x - xe;
  d(8) = wrap_angle(d(8));
  return d;
}

// Shifts the yaw entry of a measurement so its innovation is wrapped.
void unwrap_yaw_measurement(VecX& y, int yaw_row, double yaw_hat) {
  y(yaw_row) = yaw_hat + wrap_angle(y(yaw_row) - yaw_hat);
}

}  // namespace

SimResult run_closed_loop(const ScenarioConfig& cfg, const RunOptions& opt) {
  return run_closed_loop(cfg, design_lqg(cfg), opt);
}

SimResult run_closed_loop(const ScenarioConfig& cfg, const LqgDesign& design,
                          const RunOptions& opt) {
  cfg.validate();
  SimResult res;
  MetricsReport& m = res.metrics;

  const long steps = cfg.steps();
  const int period = cfg.update_period();
  const double dt = cfg.dt;
  const VehicleParams& vp = cfg.vehicle;
  const Vec12 xe = design.eq.x_e.data;
  const Vec4 ue = design.eq.u_e.data;
  const Mat4x12& K = design.gains.K;
  const bool frozen = cfg.estimator.gain_mode == GainMode::Frozen;
  const bool aiding = cfg.estimator.attitude_aiding;

  Gaussian plant_noise(cfg.seed, kPlant), imu_noise(cfg.seed, kImu),
      att_noise(cfg.seed, kAttitude), gnss_noise(cfg.seed, kGnss), init_noise(cfg.seed, kInit);
  const double on = cfg.inject_noise ? 1.0 : 0.0;

  // Plant state and estimator.
  StateVector x = cfg.x0;
  const Mat12 p0 = cfg.estimator.initial_covariance();
  FilterState fs;
  fs.P = p0;
  switch (cfg.estimator.initial_estimate) {
    case InitialEstimate::Sampled: {
      Vec12 e;
      for (int i = 0; i < 12; ++i) e(i) = on * init_noise() * std::sqrt(p0(i, i));
      fs.x_hat = deviation(x.data, xe) + e;
      break;
    }
    case InitialEstimate::Truth: fs.x_hat = deviation(x.data, xe); break;
    case InitialEstimate::Equilibrium: fs.x_hat.setZero(); break;
  }

  // Measurement models.
  const MeasMatrix c_pos = measurement_matrix({MeasurementKind::Position});
  const MatX v_pos = measurement_covariance({MeasurementKind::Position}, cfg.noise);
  const MeasurementSet ar_set{MeasurementKind::Attitude, MeasurementKind::BodyRates};
  const MeasMatrix c_ar = measurement_matrix(ar_set);
  const MatX v_ar = measurement_covariance(ar_set, cfg.noise);
  const ZuptMeasurement zupt = zupt_measurement(cfg.detector);
  MatX l_pos, l_ar;
  if (frozen) {
    l_pos = design.L_d.leftCols(3);
    if (aiding) l_ar = design.L_d.rightCols(6);
  }

  const Vec12 dist_sigma = disturbance_sigma(cfg);

  // Actuation and power.
  const BatteryParams bp = cfg.effective_battery();
  BatteryState bs = BatteryState::full(bp);
  RotorLagState lag;
  lag.tau_rot = vp.tau_rotor;
  lag.omega_out = RotorSpeeds::uniform(hover_rotor_speed(vp));
  DetectorState ds(cfg.detector.window);

  const Vec4 escale = effort_scale(cfg);
  const Vec4 utol(cfg.tolerances.thrust, cfg.tolerances.torque(0), cfg.tolerances.torque(1),
                  cfg.tolerances.torque(2));
  const double tr_p0 = p0.trace();

  long sat_count = 0, sat_input_count = 0;
  double effort_integral = 0.0, prev_effort = 0.0;
  double power_sum = 0.0, current_sum = 0.0;
  m.zeta.reserve(static_cast<std::size_t>(steps));
  if (opt.keep_series) m.est_err.reserve(static_cast<std::size_t>(steps));

  auto field = [&vp](const Vec12& s, const Vec4& u) {
    return dynamics(StateVector(s), ControlInput(u), vp);
  };

  auto fail = [&](const std::string& why) {
    m.diverged = true;
    m.divergence_reason = why;
  };

  long k = 0;
  for (; k < steps; ++k) {
    m.zeta.push_back(fs.P.trace() / tr_p0);

    // (1) LQR on the current estimate, absolute command.
    const Vec4 u_lqr = ue - K * fs.x_hat;

    // (2) Actuation chain G1 -> G2 -> G3.
    const RotorSpeeds des = allocate_nnls(ControlInput(u_lqr), design.mixer);
    const bool sat = saturated(des, design.limits);
    const RotorSpeeds in = clamp_speeds(des, design.limits);
    double p_elec = 0.0;
    RotorSpeeds cmd = in;
    if (cfg.battery_enabled) {
      p_elec = electrical_power(in, bp, vp);
      try {
        bs = dae_step(bs, p_elec, bp, dt);
      } catch (const PowerInfeasible& e) {
        fail(e.what());
        break;
      }
      cmd = sag_scaled_command(in, bs, bp);
    }
    lag = rotor_lag_step(lag, cmd, dt);
    const ControlInput u_out = applied_wrench(lag.omega_out, design.mixer);

    // (3) Plant with process disturbance.
    Vec12 w;
    for (int i = 0; i < 12; ++i) w(i) = on * plant_noise() * dist_sigma(i);
    try {
      x.data = rk4_step(field, x.data, u_out.data, dt) + w;
      normalize_attitude(x);
    } catch (const Error& e) {
      fail(e.what());
      break;
    }
    if (std::abs(x.data(6)) > cfg.divergence_attitude ||
        std::abs(x.data(7)) > cfg.divergence_attitude) {
      fail("attitude bound exceeded");
      break;
    }
    if (!x.data.allFinite() || x.data.norm() > cfg.divergence_norm) {
      fail("state norm bound exceeded");
      break;
    }

    // Accelerometer: thrust plus the disturbance acceleration plus noise.
    const Vec3 f_meas = specific_force(u_out, vp) + w.segment<3>(3) / dt +
                        on * imu_noise.vec3(cfg.noise.sigma_f / std::sqrt(dt));

    // (4) Prediction.
    const Vec4 u_pred = cfg.estimator.predict_input == PredictInput::Command ? u_lqr : u_out.data;
    fs = kf_predict(fs, u_pred - ue, design.Ad, design.Bd, design.Wd);

    // Attitude and rate sensing every step.
    const Vec3 eta_meas = x.eta() + on * att_noise.vec3(cfg.noise.sigma_eta);
    const Vec3 rate_meas = x.omega() + on * att_noise.vec3(cfg.noise.sigma_gyro);
    if (aiding) {
      VecX y(6);
      y << eta_meas - xe.segment<3>(6), rate_meas - xe.segment<3>(9);
      unwrap_yaw_measurement(y, 2, fs.x_hat(8));
      if (frozen) {
        const MatX& g = l_ar;
        fixed_gain_correct(fs.x_hat, y, c_ar, g, 1.0);
        covariance_update_with_gain(fs.P, c_ar, v_ar, g);
      } else {
        fs = kf_update(fs, y, c_ar, v_ar);
      }
    }

    // (5) Scheduled position fix.
    const Vec3 gnss = x.xi() + on * gnss_noise.vec3(cfg.noise.sigma_gnss);
    const bool pos_tick = (k + 1) % period == 0;
    if (pos_tick) {
      const VecX y = gnss - xe.segment<3>(0);
      if (frozen) {
        const double hold = cfg.estimator.position_hold ? static_cast<double>(period) : 1.0;
        const MatX g = l_pos * hold;
        fixed_gain_correct(fs.x_hat, y, c_pos, g, 1.0);
        covariance_update_with_gain(fs.P, c_pos, v_pos, g);
      } else {
        fs = kf_update(fs, y, c_pos, v_pos);
      }
      ++m.position_updates;
    }

    // (6) Stationarity detection and zero-velocity update.
    bool zupt_applied = false;
    if (cfg.detector_enabled) {
      const Vec3 eta_hat = fs.x_hat.segment<3>(6) + xe.segment<3>(6);
      const DetectorDecision dec =
          detector_step(ds, f_meas, fs.x_hat.segment<3>(3), eta_hat, cfg.detector);
      if (dec.stationary) ++m.detections;
      if (dec.apply_zupt) {
        fs = kf_update(fs, zupt.y, zupt.C, zupt.V);
        zupt_applied = true;
        ++m.zupt_count;
      }
    }

    // (7) Metrics.
    if (sat) ++sat_count;
    if (((u_lqr - ue).cwiseAbs().array() >= utol.array()).any()) ++sat_input_count;
    const double effort = u_out.data.cwiseQuotient(escale).norm();
    if (k > 0) effort_integral += 0.5 * (prev_effort + effort) * dt;
    prev_effort = effort;
    power_sum += p_elec;
    current_sum += bs.i_draw;
    const Vec12 err = deviation(x.data, xe) - fs.x_hat;
    if (opt.keep_series) {
      m.est_err.emplace_back(err.segment<3>(0).norm(), err.segment<3>(3).norm(),
                             err.segment<3>(6).norm(), err.segment<3>(9).norm());
    }

    if (opt.keep_trace && ((k + 1) % cfg.log_every == 0 || k + 1 == steps)) {
      TraceRecord r;
      r.t = static_cast<double>(k + 1) * dt;
      r.x = x.data;
      r.x_hat = fs.x_hat + xe;
      r.trace_p = fs.P.trace();
      r.u_lqr = u_lqr;
      r.omega_des = des.omega;
      r.omega_in = in.omega;
      r.omega_cmd = cmd.omega;
      r.omega_out = lag.omega_out.omega;
      r.u_out = u_out.data;
      r.zupt = zupt_applied;
      r.pos_update = pos_tick;
      r.saturated = sat;
      r.soc = bs.soc;
      r.v_oc = ocv(bs.soc, bp);
      r.v_term = bs.v_term;
      r.i_draw = bs.i_draw;
      r.p_elec = p_elec;
      res.trace.records.push_back(r);
    }
  }

  m.steps_completed = k;
  const double n = std::max<long>(k, 1);
  m.u_sat_frac = static_cast<double>(sat_count) / n;
  m.u_sat_input_frac = static_cast<double>(sat_input_count) / n;
  m.u_tot = k > 1 ? effort_integral / (dt * static_cast<double>(k - 1)) : prev_effort;
  m.power_avg = power_sum / n;
  m.current_avg = current_sum / n;
  m.final_soc = bs.soc;
  m.zeta_ss = steady_state(m.zeta);
  if (m.diverged) {
    m.err_pos_final = std::numeric_limits<double>::infinity();
    m.err_att_final = std::numeric_limits<double>::infinity();
  } else {
    const Vec12 d = deviation(x.data, xe);
    m.err_pos_final = d.segment<3>(0).norm();
    m.err_att_final = d.segment<3>(6).norm() * 180.0 / kPi;
  }
  if (!opt.keep_series) m.zeta.clear();
  return res;
}

}  // namespace czupt
