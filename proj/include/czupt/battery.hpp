#pragma once

#include <functional>
#include <limits>

#include "czupt/mathcore.hpp"
#include "czupt/vehicle.hpp"

namespace czupt {

/// Thevenin pack: OCV source, series R0, one R1 || C1 branch.
struct BatteryParams {
  double capacity_ah = 3.0;
  double r0 = 0.04;   // ohm
  double r1 = 0.05;   // ohm
  double c1 = 2.5;    // F
  Vec3 nu{14.0, 4.8, -2.0};  // V_oc = nu0 + nu1 soc + nu2 soc^2
  double eta_rot = 0.80;
  double v_nom = 14.8;       // V
  double soc_floor = 0.3;

  /// Reads r0/r1 as milliohm values (divides them by 1000).
  BatteryParams with_milliohm_resistances() const;
  double full_charge_ocv() const { return nu.sum(); }
  void validate() const;
};

struct BatteryState {
  double soc = 1.0;
  double v1 = 0.0;      // polarization voltage, V
  double v_term = 0.0;  // V
  double i_draw = 0.0;  // A

  static BatteryState full(const BatteryParams& p);
};

double ocv(double soc, const BatteryParams& p);

/// Shaft power of all rotors divided by the rotor efficiency:
/// sum k_M Omega^3 / eta_rot.
double electrical_power(const RotorSpeeds& omega, const BatteryParams& p,
                        const VehicleParams& vp);

/// Solves I V = P, V = V_oc - R0 I - V1 for the physical root, then advances
/// SoC (explicit Euler) and V1 (exact first-order update). Throws
/// PowerInfeasible when P exceeds the deliverable maximum.
BatteryState dae_step(const BatteryState& bs, double p_demand, const BatteryParams& p, double dt);

/// Omega_cmd = Omega_in * min(1, v_term / v_nom).
RotorSpeeds sag_scaled_command(const RotorSpeeds& omega_in, const BatteryState& bs,
                               const BatteryParams& p);

struct EnduranceResult {
  double minutes = std::numeric_limits<double>::infinity();  // inf: floor never reached
  double energy_wh = 0.0;
  double charge_ah = 0.0;
  double eta_eff = 0.0;  // minutes per Wh
  bool reached = false;
};

/// Discharges from `start` under power(t) until soc <= floor. Gives up
/// after max_hours and returns an unreached result.
EnduranceResult endurance(const std::function<double(double)>& power, const BatteryParams& p,
                          double floor, double dt, const BatteryState& start,
                          double max_hours = 24.0);

/// Constant-power overload starting from a full pack.
EnduranceResult endurance(double power_w, const BatteryParams& p, double floor, double dt);

}  // namespace czupt
