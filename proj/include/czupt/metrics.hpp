#pragma once

#include <vector>

#include "czupt/mathcore.hpp"

namespace czupt {

/// Fraction of samples with the saturation flag raised.
double metric_u_sat(const std::vector<bool>& saturated);

/// Time average of ||u(t) ./ scale||_2 with trapezoidal integration over
/// uniformly spaced samples. `scale` is (m g, torque tolerances).
double metric_u_tot(const std::vector<Vec4>& u, const Vec4& scale, double dt);

/// trace(P(t)) / trace(P0) from a series of traces.
std::vector<double> metric_zeta(const std::vector<double>& trace_p, double trace_p0);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and population standard deviation of the last `tail_fraction` of
/// the series.
MeanStd steady_state(const std::vector<double>& series, double tail_fraction = 0.5);

double median(std::vector<double> v);

}  // namespace czupt
