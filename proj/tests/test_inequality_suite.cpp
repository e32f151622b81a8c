#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "degen/errors.hpp"
#include "degen/inequality_suite.hpp"

using namespace degen;

namespace {
AmbientVector v2(double a, double b) {
  AmbientVector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST(CheckPair, EqualityCaseP2) {
  const auto m = check_pair(v2(2, 0), v2(1, 0), DegenParams(2.0, 0.0, 0.0));
  ASSERT_TRUE(m.monotonicity_4p2);
  EXPECT_NEAR(m.monotonicity_4p2->small, 1.0, 1e-14);
  EXPECT_NEAR(m.monotonicity_4p2->large, 1.0, 1e-14);
  EXPECT_NEAR(m.monotonicity_4p2->margin(), 0.0, 1e-14);
}

TEST(CheckPair, DegenerateRegionTrivial) {
  const auto m = check_pair(v2(0.3, 0.1), v2(-0.2, 0.5), DegenParams(3.0, 1.0, 0.0));
  for (const auto* opt : {&m.monotonicity_4p2, &m.monotonicity_2p1, &m.v_vs_h}) {
    if (*opt) {
      EXPECT_EQ((*opt)->small, 0.0);
      EXPECT_EQ((*opt)->large, 0.0);
    }
  }
}

TEST(CheckPair, GenericPairHolds) {
  const auto m = check_pair(v2(3, 4), v2(0, -5), DegenParams(3.0, 1.0, 0.0));
  for (const auto* opt : {&m.unit_vector, &m.monotonicity_4p2, &m.monotonicity_2p1, &m.v_vs_h}) {
    if (*opt) EXPECT_GE((*opt)->margin(), 0.0);
  }
}

TEST(CheckScalar, Values) {
  const DegenParams p2(2.0, 1.0, 0.0);
  const auto zero = check_scalar(0.0, p2);
  EXPECT_EQ(zero.g_bound.margin(), 0.0);
  EXPECT_EQ(zero.phi_growth.margin(), 0.0);
  const auto one = check_scalar(1.0, p2);
  EXPECT_NEAR(one.g_bound.margin(), 0.25 - (1.5 - 2 * std::log(2.0)), 1e-12);
  const auto flat = check_scalar(2.7, DegenParams(3.0, 0.0, 0.0));
  EXPECT_NEAR(flat.g_bound.relative(), 0.0, 1e-14);
}

TEST(VvsHConstant, Formula) {
  EXPECT_DOUBLE_EQ(v_vs_h_constant(2.0), 2.0 + 512.0 / 4.0);
  EXPECT_DOUBLE_EQ(v_vs_h_constant(4.0), 2.0 + 2048.0 / 16.0);
}

TEST(Campaign, EmptyConfigGivesEmptyReport) {
  SampleConfig c;
  c.num_samples = 0;
  const auto r = run_campaign(c);
  EXPECT_EQ(r.total_samples, 0);
  EXPECT_EQ(r.total_violations(), 0);
}

TEST(Campaign, DeterministicAndThreadIndependent) {
  SampleConfig c;
  c.num_samples = 3000;
  c.threads = 1;
  const auto a = run_campaign(c);
  c.threads = 3;
  const auto b = run_campaign(c);
  std::ostringstream sa, sb;
  write_campaign_csv(sa, a);
  write_campaign_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.total_samples, 3000 * 16);
}

TEST(Campaign, CoversEveryInequality) {
  SampleConfig c;
  c.num_samples = 2000;
  const auto r = run_campaign(c);
  for (const auto& name : inequality_names()) {
    ASSERT_TRUE(r.inequalities.count(name)) << name;
    EXPECT_GT(r.inequalities.at(name).evaluated, 0) << name;
  }
  EXPECT_LT(r.symmetry_max_deviation, 1e-12);
  EXPECT_LT(r.scale_covariance_max_deviation, 1e-10);
}

TEST(Campaign, RejectsBadConfig) {
  SampleConfig c;
  c.p_values = {1.5};
  EXPECT_FALSE(c.violations().empty());
  c = SampleConfig{};
  c.magnitude_range = {1.0, 0.5};
  EXPECT_FALSE(c.violations().empty());
}
