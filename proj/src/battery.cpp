#include "czupt/battery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace czupt {

BatteryParams BatteryParams::with_milliohm_resistances() const {
  BatteryParams out = *this;
  out.r0 *= 1e-3;
  out.r1 *= 1e-3;
  return out;
}

void BatteryParams::validate() const {
  if (!(capacity_ah > 0.0) || !(r0 > 0.0) || !(r1 > 0.0) || !(c1 > 0.0) || !(eta_rot > 0.0) ||
      eta_rot > 1.0 || !(v_nom > 0.0) || soc_floor < 0.0 || soc_floor >= 1.0) {
    throw ConfigError("invalid battery parameters");
  }
}

BatteryState BatteryState::full(const BatteryParams& p) {
  BatteryState s;
  s.soc = 1.0;
  s.v_term = ocv(1.0, p);
  return s;
}

double ocv(double soc, const BatteryParams& p) {
  return p.nu(0) + p.nu(1) * soc + p.nu(2) * soc * soc;
}

double electrical_power(const RotorSpeeds& omega, const BatteryParams& p,
                        const VehicleParams& vp) {
  return vp.k_torque * omega.omega.array().cube().sum() / p.eta_rot;
}

BatteryState dae_step(const BatteryState& bs, double p_demand, const BatteryParams& p, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dae_step: dt must be positive");
  if (p_demand < 0.0) throw ConfigError("dae_step: negative power demand");
  const double b = ocv(bs.soc, p) - bs.v1;
  const double disc = b * b - 4.0 * p.r0 * p_demand;
  if (disc < 0.0 || b <= 0.0) {
    throw PowerInfeasible("demand " + std::to_string(p_demand) + " W exceeds deliverable " +
                          std::to_string(std::max(0.0, b * b / (4.0 * p.r0))) + " W");
  }
  BatteryState out = bs;
  out.v_term = 0.5 * (b + std::sqrt(disc));
  out.i_draw = p_demand / out.v_term;
  out.soc = std::max(0.0, bs.soc - out.i_draw * dt / (3600.0 * p.capacity_ah));
  const double tau = p.r1 * p.c1;
  const double decay = std::exp(-dt / tau);
  out.v1 = p.r1 * out.i_draw + (bs.v1 - p.r1 * out.i_draw) * decay;
  return out;
}

RotorSpeeds sag_scaled_command(const RotorSpeeds& omega_in, const BatteryState& bs,
                               const BatteryParams& p) {
  return RotorSpeeds(omega_in.omega * std::min(1.0, bs.v_term / p.v_nom));
}

EnduranceResult endurance(const std::function<double(double)>& power, const BatteryParams& p,
                          double floor, double dt, const BatteryState& start, double max_hours) {
  EnduranceResult r;
  BatteryState s = start;
  double t = 0.0;
  const double t_max = max_hours * 3600.0;
  while (t < t_max) {
    const double pw = power(t);
    if (pw < 0.0) throw ConfigError("endurance: negative power in profile");
    const double soc_before = s.soc;
    s = dae_step(s, pw, p, dt);
    r.energy_wh += pw * dt / 3600.0;
    r.charge_ah += s.i_draw * dt / 3600.0;
    if (s.soc <= floor) {
      // Interpolate the crossing inside the last step.
      const double frac = soc_before > s.soc ? (soc_before - floor) / (soc_before - s.soc) : 1.0;
      t += frac * dt;
      r.energy_wh -= (1.0 - frac) * pw * dt / 3600.0;
      r.charge_ah -= (1.0 - frac) * s.i_draw * dt / 3600.0;
      r.reached = true;
      break;
    }
    t += dt;
  }
  if (r.reached) {
    r.minutes = t / 60.0;
    r.eta_eff = r.energy_wh > 0.0 ? r.minutes / r.energy_wh : 0.0;
  }
  return r;
}

EnduranceResult endurance(double power_w, const BatteryParams& p, double floor, double dt) {
  return endurance([power_w](double) { return power_w; }, p, floor, dt, BatteryState::full(p));
}

}  // namespace czupt
