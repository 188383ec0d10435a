#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "czupt/actuation.hpp"
#include "czupt/errors.hpp"

using namespace czupt;

namespace {

// Exhaustive NNLS: least squares on every support, keep the best feasible one.
double brute_force_objective(const Mat4& m, const Vec4& b) {
  double best = b.squaredNorm();  // x = 0
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<int> cols;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) cols.push_back(i);
    }
    MatX sub(4, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
    const VecX z = sub.colPivHouseholderQr().solve(b);
    if ((z.array() < 0.0).any()) continue;
    best = std::min(best, (sub * z - b).squaredNorm());
  }
  return best;
}

Mat4 random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat4 m;
  for (int i = 0; i < 16; ++i) m.data()[i] = g(rng);
  return m;
}

}  // namespace

TEST(Nnls, HoverWrenchIsInteriorSolution) {
  VehicleParams p;
  const Mat4 mix = mixer_matrix(p);
  const RotorSpeeds w = allocate_nnls(ControlInput(p.weight(), 0, 0, 0), mix);
  EXPECT_LT((w.omega - Vec4::Constant(hover_rotor_speed(p))).norm(), 1e-6);
}

TEST(Nnls, NegativeThrustClampsToZero) {
  VehicleParams p;
  const NnlsResult r = nnls(mixer_matrix(p), Vec4(-1.0, 0.0, 0.0, 0.0));
  EXPECT_LT(r.x.norm(), 1e-15);
}

TEST(Nnls, MatchesBruteForceOnMixer) {
  VehicleParams p;
  const Mat4 mix = mixer_matrix(p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> f(-2.0, 25.0), t(-0.5, 0.5), tz(-0.05, 0.05);
  for (int k = 0; k < 2000; ++k) {
    const Vec4 b(f(rng), t(rng), t(rng), tz(rng));
    const NnlsResult r = nnls(mix, b);
    const double obj = (mix * r.x - b).squaredNorm();
    EXPECT_NEAR(obj, brute_force_objective(mix, b), 1e-9 * std::max(1.0, b.squaredNorm()));
  }
}

TEST(Nnls, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int k = 0; k < 2000; ++k) {
    const Mat4 m = random_matrix(rng);
    const Vec4 b(g(rng), g(rng), g(rng), g(rng));
    const NnlsResult r = nnls(m, b);
    EXPECT_TRUE((r.x.array() >= 0.0).all());
    EXPECT_NEAR((m * r.x - b).squaredNorm(), brute_force_objective(m, b), 1e-8);
  }
}

TEST(Limits, FromHoverAndValidation) {
  VehicleParams p;
  const ActuatorLimits lim = ActuatorLimits::from_hover(p);
  EXPECT_NEAR(lim.omega_min, 0.1 * hover_rotor_speed(p), 1e-12);
  EXPECT_NEAR(lim.omega_max, 1.5 * hover_rotor_speed(p), 1e-12);
  EXPECT_THROW(ActuatorLimits::from_hover(p, 1.2, 1.1), ConfigError);
}

TEST(Limits, ClampAndSaturationFlag) {
  const ActuatorLimits lim{100.0, 900.0};
  const RotorSpeeds des(Vec4(50.0, 500.0, 950.0, 900.0));
  EXPECT_TRUE(saturated(des, lim));
  const RotorSpeeds c = clamp_speeds(des, lim);
  EXPECT_EQ(c.omega, Vec4(100.0, 500.0, 900.0, 900.0));
  EXPECT_FALSE(saturated(c, lim));
}

TEST(RotorLag, ExactExponentialResponse) {
  RotorLagState st;
  st.tau_rot = 0.05;
  st.omega_out = RotorSpeeds::uniform(400.0);
  const RotorSpeeds cmd = RotorSpeeds::uniform(600.0);
  for (int k = 0; k < 100; ++k) st = rotor_lag_step(st, cmd, 1e-3);
  const double expect = 600.0 - 200.0 * std::exp(-0.1 / 0.05);
  EXPECT_NEAR(st.omega_out.omega(2), expect, 1e-9);
  EXPECT_THROW(rotor_lag_step(st, cmd, 0.0), ConfigError);
}

TEST(RotorLag, StepSizeIndependent) {
  RotorLagState a, b;
  a.omega_out = b.omega_out = RotorSpeeds::uniform(300.0);
  const RotorSpeeds cmd(Vec4(500.0, 200.0, 300.0, 700.0));
  for (int k = 0; k < 10; ++k) a = rotor_lag_step(a, cmd, 1e-2);
  b = rotor_lag_step(b, cmd, 1e-1);
  EXPECT_LT((a.omega_out.omega - b.omega_out.omega).norm(), 1e-9);
}

TEST(Wrench, RoundTripThroughAllocation) {
  VehicleParams p;
  const Mat4 mix = mixer_matrix(p);
  const ControlInput u(10.5, 0.05, -0.03, 0.004);
  const ControlInput back = applied_wrench(allocate_nnls(u, mix), mix);
  EXPECT_LT((back.data - u.data).norm(), 1e-9);
}
