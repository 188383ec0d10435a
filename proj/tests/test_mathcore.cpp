#include <gtest/gtest.h>

#include <cmath>

#include "czupt/errors.hpp"
#include "czupt/mathcore.hpp"

using namespace czupt;

TEST(Skew, MatchesCrossProduct) {
  const Vec3 a(0.3, -1.2, 2.5), b(-0.7, 0.4, 1.1);
  EXPECT_LT((skew(a) * b - a.cross(b)).norm(), 1e-15);
  EXPECT_LT((skew(a) + skew(a).transpose()).norm(), 1e-15);
}

TEST(Rk4, ExponentialDecayMatchesClosedForm) {
  // x' = -a x + u, exact x(t) = u/a + (x0 - u/a) e^{-a t}
  const double a = 2.0, u = 0.5, dt = 0.01;
  auto f = [a](const Vec3& x, const double& in) -> Vec3 { return -a * x + Vec3::Constant(in); };
  Vec3 x = Vec3::Constant(1.0);
  for (int k = 0; k < 100; ++k) x = rk4_step(f, x, u, dt);
  const double exact = u / a + (1.0 - u / a) * std::exp(-a * 1.0);
  EXPECT_NEAR(x(0), exact, 1e-9);
  // RK4 on a linear ODE is exactly its degree-4 Taylor amplification factor.
  const double z = -a * dt;
  const double r = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
  EXPECT_NEAR(x(0), u / a + (1.0 - u / a) * std::pow(r, 100), 1e-14);
}

TEST(Rk4, FourthOrderConvergence) {
  // Halving dt should cut the global error by about 16.
  auto f = [](const Vec3& x, const double&) -> Vec3 { return Vec3(x(1), -x(0), 0.0); };
  auto err = [&](double dt) {
    Vec3 x(1.0, 0.0, 0.0);
    const int n = static_cast<int>(std::lround(2.0 / dt));
    for (int k = 0; k < n; ++k) x = rk4_step(f, x, 0.0, dt);
    return std::abs(x(0) - std::cos(2.0));
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_GT(ratio, 14.0);
  EXPECT_LT(ratio, 18.0);
}

TEST(Rk4, NonFiniteDerivativeThrows) {
  auto f = [](const Vec3&, const double&) -> Vec3 {
    return Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  };
  EXPECT_THROW(rk4_step(f, Vec3::Zero().eval(), 0.0, 0.1), NonFiniteState);
}

TEST(RankSvd, DetectsDeficiency) {
  MatX m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 0, 1, 1;
  EXPECT_EQ(rank_svd(m), 2);
  EXPECT_EQ(rank_svd(MatX::Identity(5, 5)), 5);
  EXPECT_EQ(rank_svd(MatX::Zero(4, 4)), 0);
}

TEST(WrapAngle, HalfOpenInterval) {
  EXPECT_NEAR(wrap_angle(kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(3.0 * kPi / 2.0), -kPi / 2.0, 1e-12);
  EXPECT_NEAR(wrap_angle(0.25), 0.25, 1e-15);
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(a - w, 2.0 * kPi), 0.0, 1e-12);
  }
}
