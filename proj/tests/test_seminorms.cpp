#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degen/errors.hpp"
#include "degen/problem.hpp"
#include "degen/seminorms.hpp"
#include "degen/solver.hpp"
#include "oracles.hpp"

using namespace degen;
using degen::testing::ramp;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory time_constant(const SpaceTimeGrid& g, const ScalarField& f) {
  Trajectory t{g, {}};
  t.levels.assign(static_cast<std::size_t>(g.steps + 1), f);
  return t;
}

ScalarField random_field(const Mesh& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(m);
  for (double& v : f.values()) v = u(rng);
  return f;
}

ScalarField bump(const Mesh& m) {
  return ScalarField::sample(m, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
}

}  // namespace

TEST(Cylinder, RejectsRegionsOutsideGrid) {
  const SpaceTimeGrid g{1.0, 16, 0.0, 0.1, 10};
  EXPECT_THROW(cylinder_levels(g, Cylinder{{0.5, 0.5}, 0.1, 0.6}), InvalidRegion);
  EXPECT_THROW(cylinder_levels(g, Cylinder{{0.1, 0.5}, 0.1, 0.2}), InvalidRegion);
  EXPECT_THROW(cylinder_levels(g, Cylinder{{0.5, 0.5}, 0.2, 0.2}), InvalidRegion);
  EXPECT_EQ(cylinder_levels(g, Cylinder{{0.5, 0.5}, 0.1, 0.2}).size(), 4u);
}

TEST(LpNorm, ConstantField) {
  const SpaceTimeGrid g{1.0, 64, 0.0, 0.16, 32};
  const auto t = time_constant(g, ScalarField(mesh_of(g), -3.0));
  const Cylinder cyl{{0.5, 0.5}, 0.16, 0.3};
  const double measure = kPi * 0.09 * 0.09;
  EXPECT_NEAR(lp_norm_cylinder(t, cyl, 2.0), 3.0 * std::sqrt(measure), 0.03 * 3.0 * std::sqrt(measure));
}

TEST(LpNorm, SupportedFieldUnchangedByLargerCylinder) {
  const SpaceTimeGrid g{1.0, 32, 0.0, 0.16, 16};
  const auto f = ScalarField::sample(mesh_of(g), [](double x, double y) {
    return std::hypot(x - 0.5, y - 0.5) < 0.15 ? 1.0 + x : 0.0;
  });
  const auto t = time_constant(g, f);
  const double a = lp_norm_cylinder(t, Cylinder{{0.5, 0.5}, 0.16, 0.2}, 3.0);
  const double b = lp_norm_cylinder(t, Cylinder{{0.5, 0.5}, 0.16, 0.3}, 3.0);
  EXPECT_GT(a, 0.0);
  // The larger cylinder also covers more time levels; compare per level.
  const double la = cylinder_levels(g, Cylinder{{0.5, 0.5}, 0.16, 0.2}).size();
  const double lb = cylinder_levels(g, Cylinder{{0.5, 0.5}, 0.16, 0.3}).size();
  EXPECT_NEAR(std::pow(a, 3) / la, std::pow(b, 3) / lb, 1e-12);
}

TEST(LpNorm, SineFieldAgainstFineQuadrature) {
  const int n = 32;
  const SpaceTimeGrid g{1.0, n, 0.0, 0.16, 16};
  const auto t = time_constant(g, bump(mesh_of(g)));
  const Cylinder cyl{{0.5, 0.5}, 0.16, 0.3};
  const int fine = 2000;
  double ref = 0.0;
  for (int j = 0; j < fine; ++j) {
    for (int i = 0; i < fine; ++i) {
      const double x = (i + 0.5) / fine, y = (j + 0.5) / fine;
      if (std::hypot(x - 0.5, y - 0.5) < 0.3) ref += std::pow(std::sin(kPi * x) * std::sin(kPi * y), 2);
    }
  }
  ref = std::sqrt(ref / (fine * double(fine)) * 0.09);
  EXPECT_NEAR(lp_norm_cylinder(t, cyl, 2.0), ref, 2.0 / n * ref);
}

TEST(SupL2, TimeConstantAndMonotone) {
  const SpaceTimeGrid g{1.0, 16, 0.0, 1.0, 8};
  const Mesh m = mesh_of(g);
  const Ball ball{{0.5, 0.5}, 0.3};
  const auto f = bump(m);
  const auto c = time_constant(g, f);
  EXPECT_DOUBLE_EQ(sup_l2_in_time(c, ball, 0.0, 1.0), sup_l2_in_time(c, ball, 0.5, 0.5));
  Trajectory lin{g, {}};
  for (int k = 0; k <= g.steps; ++k) lin.levels.push_back(ScalarField(m, g.time(k)));
  EXPECT_DOUBLE_EQ(sup_l2_in_time(lin, ball, 0.0, 0.5), sup_l2_in_time(lin, ball, 0.5, 0.5));
}

TEST(SupL2, HeatSineAttainedAtStart) {
  const SpaceTimeGrid g{1.0, 16, 0.0, 0.05, 8};
  const auto spec = manufactured_problem("heat_sine", g, DegenParams(2, 0, 1e-8));
  const auto ref = sample_reference(spec);
  const Ball ball{{0.5, 0.5}, 0.4};
  EXPECT_DOUBLE_EQ(sup_l2_in_time(ref, ball, 0.0, 0.05), sup_l2_in_time(ref, ball, 0.0, 0.0));
}

TEST(FiniteDifference, AffineAndErrors) {
  const Mesh m{16, 1.0 / 16};
  const auto f = ScalarField::sample(m, [](double x, double y) { return 2.0 * x - 5.0 * y; });
  for (int dir : {0, 1}) {
    const auto d = finite_difference(f, dir, 3 * m.h);
    for (int j = 0; j < m.side(); ++j) {
      for (int i = 0; i < m.side(); ++i) {
        if (d.valid[m.node(i, j)]) EXPECT_NEAR(d.delta(i, j), dir == 0 ? 2.0 : -5.0, 1e-12);
      }
    }
  }
  EXPECT_THROW(finite_difference(f, 0, 0.5 * m.h), InvalidShift);
  EXPECT_THROW(finite_difference(f, 0, 0.0), InvalidShift);
}

TEST(FiniteDifference, LeibnizIdentity) {
  const Mesh m{20, 0.05};
  const auto f = random_field(m, 1), g = random_field(m, 2);
  ScalarField fg(m);
  for (std::size_t k = 0; k < fg.values().size(); ++k) fg.values()[k] = f.values()[k] * g.values()[k];
  for (int dir : {0, 1}) {
    for (int k : {1, 3, -2}) {
      const auto dfg = finite_difference(fg, dir, k * m.h);
      const auto df = finite_difference(f, dir, k * m.h);
      const auto dg = finite_difference(g, dir, k * m.h);
      for (int j = 0; j < m.side(); ++j) {
        for (int i = 0; i < m.side(); ++i) {
          if (!dfg.valid[m.node(i, j)]) continue;
          const double fs = f(i + (dir == 0 ? k : 0), j + (dir == 1 ? k : 0));
          EXPECT_NEAR(dfg.tau(i, j), fs * dg.tau(i, j) + g(i, j) * df.tau(i, j), 1e-12);
        }
      }
    }
  }
}

TEST(FiniteDifference, IncrementBoundedBySlope) {
  const Mesh m{32, 1.0 / 32};
  const auto f = bump(m);
  for (int k : {1, 2, 4}) {
    const auto d = finite_difference(f, 0, k * m.h);
    double lhs = 0.0;
    for (int j = 0; j < m.side(); ++j) {
      for (int i = 0; i < m.side(); ++i) lhs += d.tau(i, j) * d.tau(i, j);
    }
    // |tau_h F| <= |h| sup|D F| with sup|D F| = pi.
    EXPECT_LE(lhs, std::pow(k * m.h * kPi, 2) * m.node_count());
  }
}

TEST(Gagliardo, ConstantIsZeroAndHomogeneity) {
  const Mesh m{12, 1.0 / 12};
  SmoothnessOrder o;
  EXPECT_EQ(gagliardo_seminorm(ScalarField(m, 4.0), o), 0.0);
  const auto f = random_field(m, 5), g = random_field(m, 6);
  ScalarField sum(m), scaled(m);
  for (std::size_t k = 0; k < f.values().size(); ++k) {
    sum.values()[k] = f.values()[k] + g.values()[k];
    scaled.values()[k] = -2.5 * f.values()[k];
  }
  const double nf = gagliardo_seminorm(f, o);
  EXPECT_NEAR(gagliardo_seminorm(scaled, o), 2.5 * nf, 1e-12 * nf);
  EXPECT_LE(gagliardo_seminorm(sum, o), nf + gagliardo_seminorm(g, o) + 1e-12);
}

TEST(Gagliardo, DilationOnNestedGrids) {
  // v on the unit square at spacing h equals v(x/2) on the side-2 square at spacing 2h.
  const Mesh unit{10, 0.1};
  const Mesh big{10, 0.2};
  auto fn = [](double x, double y) { return std::sin(3 * x) + x * y; };
  const auto a = ScalarField::sample(unit, fn);
  const auto b = ScalarField::sample(big, [&](double x, double y) { return fn(x / 2, y / 2); });
  SmoothnessOrder o;
  o.s = 0.3;
  o.q = 3.0;
  // seminorm^q scales by 2^{n - sq} with n = 2.
  const double ratio = std::pow(gagliardo_seminorm(b, o) / gagliardo_seminorm(a, o), o.q);
  EXPECT_NEAR(ratio, std::pow(2.0, 2.0 - o.s * o.q), 1e-12);
}

TEST(Gagliardo, RampWithinFivePercentOfOracle) {
  const Mesh m{64, 1.0 / 64};
  const auto f = ScalarField::sample(m, [](double x, double) { return ramp(x); });
  SmoothnessOrder o;
  o.s = 0.5;
  o.q = 2.0;
  const double oracle = degen::testing::ramp_gagliardo_oracle(512);
  EXPECT_NEAR(gagliardo_seminorm(f, o), oracle, 0.05 * oracle);
}

TEST(Besov, ZeroAndHomogeneity) {
  const Mesh m{24, 1.0 / 24};
  SmoothnessOrder o;
  o.cutoff = 0.25;
  EXPECT_EQ(besov_seminorm(ScalarField(m), o), 0.0);
  const auto f = bump(m);
  ScalarField scaled(m);
  for (std::size_t k = 0; k < f.values().size(); ++k) scaled.values()[k] = 3.0 * f.values()[k];
  const double nf = besov_seminorm(f, o);
  EXPECT_GT(nf, 0.0);
  EXPECT_NEAR(besov_seminorm(scaled, o), 3.0 * nf, 1e-12 * nf);
  o.cutoff = 0.5 * m.h;
  EXPECT_THROW(besov_seminorm(f, o), InvalidRegion);
}

TEST(Besov, LipschitzBoundForSupForm) {
  const Mesh m{32, 1.0 / 32};
  SmoothnessOrder o;
  o.s = 0.5;
  o.p = 2.0;
  o.q = std::numeric_limits<double>::infinity();
  o.cutoff = 0.25;
  // Lipschitz constant pi sqrt 2; increments live on the square grown by the cutoff.
  const double lip = kPi * std::sqrt(2.0);
  const double bound = lip * std::pow(o.cutoff, 1.0 - o.s) * (1.0 + 2 * o.cutoff);
  EXPECT_LE(besov_seminorm(bump(m), o), 1.05 * bound);
}

TEST(Besov, ShellRefinementStable) {
  const Mesh m{32, 1.0 / 32};
  SmoothnessOrder o;
  o.q = 1.0;
  o.cutoff = 0.25;
  const double a = besov_seminorm(bump(m), o);
  o.shells_per_decade *= 2;
  const double b = besov_seminorm(bump(m), o);
  EXPECT_NEAR(a, b, 0.02 * b);
}

TEST(ParabolicBesov, ZeroAndFactorization) {
  const SpaceTimeGrid g{1.0, 24, 0.0, 0.16, 8};
  const Mesh m = mesh_of(g);
  const Cylinder cyl{{0.5, 0.5}, 0.16, 0.3};
  EXPECT_EQ(parabolic_besov_norm(time_constant(g, ScalarField(m)), cyl, 0.5, 1.5), 0.0);
  const auto w = bump(m);
  const auto flat = time_constant(g, w);
  Trajectory sep{g, {}};
  double gsum = 0.0, count = 0.0;
  const auto levels = cylinder_levels(g, cyl);
  for (int k = 0; k <= g.steps; ++k) {
    const double gk = 1.0 + std::sin(7.0 * g.time(k));
    ScalarField f(m);
    for (std::size_t q = 0; q < f.values().size(); ++q) f.values()[q] = gk * w.values()[q];
    sep.levels.push_back(f);
  }
  for (int k : levels) {
    gsum += std::pow(std::abs(1.0 + std::sin(7.0 * g.time(k))), 1.5);
    count += 1.0;
  }
  const double a = parabolic_besov_norm(flat, cyl, 0.5, 1.5);
  const double b = parabolic_besov_norm(sep, cyl, 0.5, 1.5);
  EXPECT_NEAR(b / a, std::pow(gsum / count, 1.0 / 1.5), 1e-10);
}

TEST(Nikolskii, AffineConstantAndSign) {
  const SpaceTimeGrid g{1.0, 64, 0.0, 0.16, 16};
  const Mesh m = mesh_of(g);
  const Cylinder cyl{{0.5, 0.5}, 0.16, 0.3};
  const std::vector<double> shifts{m.h, 2 * m.h, 4 * m.h, 8 * m.h};
  const auto affine = time_constant(g, ScalarField::sample(m, [](double x, double y) { return x - 2 * y; }));
  const auto fa = nikolskii_fit(affine, cyl, 2.0, shifts);
  EXPECT_NEAR(fa.theta, 1.0, 1e-6);
  EXPECT_FALSE(fa.degenerate);
  const auto fc = nikolskii_fit(time_constant(g, ScalarField(m, 2.0)), cyl, 2.0, shifts);
  EXPECT_TRUE(fc.degenerate);
  EXPECT_EQ(fc.theta, 1.0);
  const auto sign = degen::testing::sign_trajectory(g);
  const auto fs = nikolskii_fit(sign, cyl, 2.0, shifts);
  EXPECT_NEAR(fs.theta, 0.5, 0.05);
  EXPECT_NEAR(fs.raw_slope, degen::testing::sign_theta_by_counting(g, cyl, {1, 2, 4, 8}, 2.0), 1e-12);
  EXPECT_THROW(nikolskii_fit(sign, cyl, 2.0, {m.h}), InsufficientData);
  EXPECT_THROW(nikolskii_fit(sign, cyl, 2.0, {m.h, 1.5 * m.h}), InvalidShift);
}

TEST(Nikolskii, AffineGradientIsDegenerate) {
  const SpaceTimeGrid g{1.0, 32, 0.0, 0.16, 8};
  const auto affine = time_constant(g, ScalarField::sample(mesh_of(g), [](double x, double y) { return 0.3 * x + y; }));
  const Cylinder cyl{{0.5, 0.5}, 0.16, 0.3};
  const auto fit = nikolskii_fit(gradient_trajectory(affine), cyl, 3.0, {g.h(), 2 * g.h(), 4 * g.h()});
  EXPECT_TRUE(fit.degenerate);
  EXPECT_EQ(fit.theta, 1.0);
}

TEST(GradV, SubthresholdIsZeroAndAffineFieldExact) {
  const SpaceTimeGrid g{1.0, 32, 0.0, 0.16, 8};
  const Cylinder cyl{{0.5, 0.5}, 0.16, 0.2};
  const DegenParams limit(3, 1, 0.0);
  const auto drift = sample_reference(manufactured_problem("linear_drift", g, limit));
  EXPECT_EQ(grad_l2_of_v(drift, limit, cyl), 0.0);
  // Triangle field W(x) = (x, 0): cell-average gradient is exactly e1 e1^T.
  VectorTrajectory w{g, {}};
  VectorField f(mesh_of(g));
  for (int j = 0; j < g.cells; ++j) {
    for (int i = 0; i < g.cells; ++i) {
      for (int t = 0; t < 2; ++t) f.at(i, j, t) = {f.centroid(i, j, t).x(), 0.0};
    }
  }
  w.levels.assign(static_cast<std::size_t>(g.steps + 1), f);
  int cells = 0;
  for (int j = 0; j < g.cells; ++j) {
    for (int i = 0; i < g.cells; ++i) {
      const double dx = (i + 0.5) * g.h() - 0.5, dy = (j + 0.5) * g.h() - 0.5;
      if (dx * dx + dy * dy <= 0.04 * (1.0 + 1e-12)) ++cells;
    }
  }
  const double expected = cells * g.h() * g.h() * g.tau() * cylinder_levels(g, cyl).size();
  EXPECT_NEAR(grad_l2_of_field(w, cyl), expected, 1e-12 * expected);
}
