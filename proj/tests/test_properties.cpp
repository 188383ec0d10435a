#include <gtest/gtest.h>

#include "properties.hpp"

using namespace czupt;

TEST(Properties, CovarianceStaysPsd) {
  const props::Outcome o = props::covariance_psd(1000000);
  EXPECT_TRUE(o.pass) << o.detail << ", min eigenvalue " << o.worst;
}

TEST(Properties, ZetaSawtooth) {
  const props::Outcome o = props::zeta_sawtooth();
  EXPECT_TRUE(o.pass) << o.detail << ", worst relative step " << o.worst;
}

TEST(Properties, NnlsKkt) {
  const props::Outcome o = props::nnls_kkt(10000);
  EXPECT_TRUE(o.pass) << "worst scaled violation " << o.worst;
}

TEST(Properties, DetectorThresholdMonotone) {
  const props::Outcome o = props::detector_threshold_monotone(200);
  EXPECT_TRUE(o.pass) << o.detail << ", lost " << o.worst;
}

TEST(Properties, BatteryBookkeeping) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const props::Outcome o = props::battery_bookkeeping(seed);
    EXPECT_TRUE(o.pass) << o.detail << ", charge error " << o.worst;
  }
}
