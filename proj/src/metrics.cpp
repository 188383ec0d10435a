#include "czupt/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace czupt {

double metric_u_sat(const std::vector<bool>& saturated) {
  if (saturated.empty()) throw LengthMismatch("metric_u_sat: empty trace");
  const auto n = std::count(saturated.begin(), saturated.end(), true);
  return static_cast<double>(n) / static_cast<double>(saturated.size());
}

double metric_u_tot(const std::vector<Vec4>& u, const Vec4& scale, double dt) {
  if (u.empty()) throw LengthMismatch("metric_u_tot: empty trace");
  if (u.size() == 1) return u.front().cwiseQuotient(scale).norm();
  double integral = 0.0;
  double prev = u.front().cwiseQuotient(scale).norm();
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double cur = u[i].cwiseQuotient(scale).norm();
    integral += 0.5 * (prev + cur) * dt;
    prev = cur;
  }
  return integral / (dt * static_cast<double>(u.size() - 1));
}

std::vector<double> metric_zeta(const std::vector<double>& trace_p, double trace_p0) {
  if (!(trace_p0 > 0.0)) throw ConfigError("metric_zeta: trace(P0) must be positive");
  std::vector<double> z(trace_p.size());
  std::transform(trace_p.begin(), trace_p.end(), z.begin(),
                 [trace_p0](double t) { return t / trace_p0; });
  return z;
}

MeanStd steady_state(const std::vector<double>& series, double tail_fraction) {
  MeanStd out;
  if (series.empty()) return out;
  const auto n = series.size();
  const auto start =
      std::min(n - 1, static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * n)));
  const double count = static_cast<double>(n - start);
  for (auto i = start; i < n; ++i) out.mean += series[i];
  out.mean /= count;
  double var = 0.0;
  for (auto i = start; i < n; ++i) var += (series[i] - out.mean) * (series[i] - out.mean);
  out.std = std::sqrt(var / count);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace czupt
