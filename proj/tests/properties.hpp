#pragma once

#include <cstdint>
#include <string>

// Randomized property checks shared by the unit tests and the acceptance
// binary. Each returns the worst observed value next to its pinned bound.

namespace czupt::props {

struct Outcome {
  bool pass = false;
  double worst = 0.0;
  double bound = 0.0;
  std::string detail;
};

/// Min eigenvalue of P after symmetrization over `cycles` predict/update
/// cycles on the hover model (attitude and rates every step, position every
/// 200 steps, a velocity fix every 500). Bound: > -1e-12.
Outcome covariance_psd(long cycles, std::uint64_t seed = 1);

/// Closed-loop zeta series with optimal updates and no attitude channel:
/// non-decreasing between position fixes, strict drop at each fix.
Outcome zeta_sawtooth();

/// NNLS optimality conditions on random mixer wrenches and random matrices,
/// relative to the gradient scale.
Outcome nnls_kkt(int samples, std::uint64_t seed = 1);

/// Enlarging delta_f or delta_v never removes a detection on replayed
/// random traces. `worst` counts lost detections.
Outcome detector_threshold_monotone(int traces, std::uint64_t seed = 1);

/// Coulomb count against C_bat * delta SoC under a varying load, relative
/// error. Also checks that SoC never increases.
Outcome battery_bookkeeping(std::uint64_t seed = 1);

}  // namespace czupt::props
