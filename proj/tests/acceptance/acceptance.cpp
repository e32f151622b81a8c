// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "degen/core_maps.hpp"
#include "degen/experiments.hpp"
#include "degen/inequality_suite.hpp"
#include "degen/problem.hpp"
#include "degen/seminorms.hpp"
#include "degen/solver.hpp"
#include "oracles.hpp"

using namespace degen;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const SweepAssertion* find(const SweepReport& r, const std::string& name) {
  for (const auto& a : r.assertions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

bool rows_converged(const SweepReport& r) {
  for (const auto& row : r.rows) {
    if (!row.converged) return false;
  }
  return !r.rows.empty();
}

Outcome inequality_campaign() {
  const auto start = Clock::now();
  SampleConfig c;
  c.num_samples = 1'000'000;
  const auto report = run_campaign(c);
  const double secs = seconds_since(start);
  const bool ok = report.passed() && report.total_samples == 16'000'000 && secs <= 120.0;
  return {ok, fmt("%lld samples, %lld violations, %.1f s (limit 120 s)",
                  static_cast<long long>(report.total_samples),
                  static_cast<long long>(report.total_violations()), secs)};
}

Outcome g_profile_oracles() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> log_t(-6.0, 6.0), log_ratio(-1.0, 4.0), log_l(-2.0, 1.0);
  const std::vector<double> ps{2.0, 2.5, 3.0, 4.0};
  double worst_flat = 0.0, worst_flat_fast = 0.0, worst_p2 = 0.0, worst_p2_fast = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double p = ps[static_cast<std::size_t>(k) % ps.size()];
    const double t = std::pow(10.0, log_t(rng));
    const double closed = 2.0 / p * std::pow(t, p / 2.0);
    worst_flat = std::max(worst_flat, std::abs(g_profile_quadrature(t, p, 0.0, 0.0) - closed) / closed);
    worst_flat_fast = std::max(worst_flat_fast, std::abs(GProfile(p, 0.0, 0.0)(t) - closed) / closed);

    const double lambda = std::pow(10.0, log_l(rng));
    const double t2 = lambda * std::pow(10.0, log_ratio(rng));
    const double sym = g_profile_closed_p2_alpha32(t2, lambda);
    worst_p2 = std::max(worst_p2, std::abs(g_profile_quadrature(t2, 2.0, lambda, 1.5) - sym) / sym);
    worst_p2_fast = std::max(worst_p2_fast, std::abs(GProfile(2.0, lambda, 1.5)(t2) - sym) / sym);
  }
  const bool ok = worst_flat <= 1e-12 && worst_flat_fast <= 1e-12 && worst_p2 <= 1e-10 &&
                  worst_p2_fast <= 1e-10;
  return {ok, fmt("lambda=0 max rel %.1e (quadrature) %.1e (evaluator), limit 1e-12; "
                  "p=2 alpha=3/2 max rel %.1e (quadrature) %.1e (evaluator), limit 1e-10; 1000 pairs",
                  worst_flat, worst_flat_fast, worst_p2, worst_p2_fast)};
}

Outcome flux_consistency() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_r(-1.0, 1.0), angle(0.0, 2.0 * M_PI), unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  const std::vector<double> ps{2.0, 2.5, 3.0, 4.0}, lambdas{0.0, 0.5, 1.0, 2.0}, epss{0.0, 1e-4, 1e-2, 1.0};
  double worst_flux = 0.0, worst_jac = 0.0, worst_sandwich = 0.0;
  int points = 0;
  while (points < 10000) {
    const double p = ps[rng() % ps.size()];
    const double lambda = lambdas[rng() % lambdas.size()];
    const double eps = epss[rng() % epss.size()];
    const DegenParams params(p, lambda, eps);
    const double r = std::pow(10.0, log_r(rng)) * std::max(lambda, 1.0);
    if (lambda > 0.0 && std::abs(r - lambda) < 0.05 * lambda) continue;
    const double a = angle(rng);
    AmbientVector xi(2);
    xi << r * std::cos(a), r * std::sin(a);
    const double step = 1e-5 * r;
    const AmbientVector f = flux(xi, params);
    const Matrix jac = flux_jacobian(xi, params);
    AmbientVector fd_flux(2);
    Matrix fd_jac(2, 2);
    for (int c = 0; c < 2; ++c) {
      AmbientVector xp = xi, xm = xi;
      xp(c) += step;
      xm(c) -= step;
      fd_flux(c) = (energy_density(xp, params) - energy_density(xm, params)) / (2.0 * step);
      fd_jac.col(c) = (flux(xp, params) - flux(xm, params)) / (2.0 * step);
    }
    if (f.norm() > 0.0) worst_flux = std::max(worst_flux, (fd_flux - f).norm() / f.norm());
    else worst_flux = std::max(worst_flux, fd_flux.norm() > 0.0 ? 1.0 : 0.0);
    if (jac.norm() > 0.0) worst_jac = std::max(worst_jac, (fd_jac - jac).norm() / jac.norm());
    else worst_jac = std::max(worst_jac, fd_jac.norm() > 0.0 ? 1.0 : 0.0);

    const auto [lo, hi] = ellipticity_bounds(xi, params);
    AmbientVector z(2);
    z << normal(rng), normal(rng);
    const double q = z.dot(jac * z), zz = z.squaredNorm();
    const double slack = 1e-9 * (std::abs(q) + hi * zz);
    worst_sandwich = std::max({worst_sandwich, (lo * zz - q) / (hi * zz + 1e-300),
                               (q - hi * zz) / (hi * zz + 1e-300)});
    if (lo * zz - q > slack || q - hi * zz > slack) worst_sandwich = std::max(worst_sandwich, 1.0);
    ++points;
  }
  const bool ok = worst_flux <= 1e-5 && worst_jac <= 1e-5 && worst_sandwich <= 1e-9;
  return {ok, fmt("10000 points; flux max rel %.1e, jacobian max rel %.1e (limit 1e-5); "
                  "sandwich worst excess %.1e (limit 1e-9)",
                  worst_flux, worst_jac, worst_sandwich)};
}

Outcome heat_convergence() {
  const auto start = Clock::now();
  std::vector<double> errs;
  for (int n : {16, 32, 64}) {
    const double h = 1.0 / n;
    const SpaceTimeGrid g{1.0, n, 0.0, 0.05, static_cast<int>(std::lround(0.05 / (0.5 * h * h)))};
    const auto spec = manufactured_problem("heat_sine", g, DegenParams(2.0, 0.0, 1e-8));
    const auto sol = solve_cauchy_dirichlet(spec);
    const auto ref = sample_reference(spec);
    double e = 0.0;
    for (std::size_t k = 0; k < ref.levels.size(); ++k) {
      for (std::size_t q = 0; q < ref.levels[k].values().size(); ++q) {
        e = std::max(e, std::abs(ref.levels[k].values()[q] - sol.trajectory.levels[k].values()[q]));
      }
    }
    errs.push_back(e);
  }
  const double o1 = std::log2(errs[0] / errs[1]), o2 = std::log2(errs[1] / errs[2]);
  const double secs = seconds_since(start);
  const bool ok = o1 >= 1.8 && o2 >= 1.8 && secs <= 60.0;
  return {ok, fmt("L-inf errors %.2e %.2e %.2e, orders %.2f %.2f (limit 1.8), %.1f s (limit 60 s)",
                  errs[0], errs[1], errs[2], o1, o2, secs)};
}

Outcome degenerate_stationarity() {
  const SpaceTimeGrid g{1.0, 48, 0.0, 0.16, 32};
  const DegenParams params(3.0, 1.0, 1e-8);
  const auto spec = manufactured_problem("linear_drift", g, params);
  const auto sol = solve_cauchy_dirichlet(spec);
  double drift = 0.0;
  for (const auto& lv : sol.trajectory.levels) {
    for (std::size_t q = 0; q < lv.values().size(); ++q) {
      drift = std::max(drift, std::abs(lv.values()[q] - sol.trajectory.levels[0].values()[q]));
    }
  }
  double vmax = 0.0;
  for (const auto& lv : v_trajectory(sol.trajectory, params).levels) {
    for (int k = 0; k < lv.sample_count(); ++k) vmax = std::max(vmax, lv[k].norm());
  }
  const bool ok = drift <= 1e-6 && vmax == 0.0;
  return {ok, fmt("max drift %.1e (limit 1e-6), max |V(Du)| %.1e (must be exactly 0)", drift, vmax)};
}

Outcome cone_sweep() {
  const auto start = Clock::now();
  const SweepSpec spec = SweepSpec::defaults("cone", 3.0, 1.0);
  const auto cmp = run_comparison_sweep(spec);
  const auto sob = run_sobolev_sweep(spec);
  const double secs = seconds_since(start);
  std::vector<double> eps, v, s;
  for (const auto& row : cmp.rows) {
    eps.push_back(row.eps);
    v.push_back(row.v_l2);
  }
  for (const auto& row : sob.rows) s.push_back(row.sobolev);
  const double slope = tail_slope(eps, v);
  const double sp = spread(s);
  const bool ok = rows_converged(cmp) && rows_converged(sob) && slope >= 0.8 && sp <= 10.0 &&
                  secs <= 600.0;
  std::ostringstream os;
  os << "|V(Du_eps)|^2 values";
  for (double x : v) os << ' ' << fmt("%.2e", x);
  os << fmt(", slope %.3f (limit 0.8); Sobolev values", slope);
  for (double x : s) os << ' ' << fmt("%.2e", x);
  os << fmt(", max/min %.3g (limit 10); %.1f s (limit 600 s)", sp, secs);
  return {ok, os.str()};
}

Outcome energy_uniformity() {
  std::ostringstream os;
  bool ok = true;
  for (double lambda : {0.0, 1.0}) {
    const auto r = run_energy_sweep(SweepSpec::defaults("mms_smooth", 3.0, lambda));
    const auto* a = find(r, "energy_ratio_spread");
    const bool pass = rows_converged(r) && a && a->applicable && a->passed;
    ok = ok && pass;
    os << fmt("lambda=%g ratio max/min %.4g; ", lambda, a ? a->value : NAN);
  }
  os << "limit 4";
  return {ok, os.str()};
}

Outcome time_derivative() {
  const auto r = run_time_derivative_check(SweepSpec::defaults("mms_smooth", 3.0, 0.0));
  const auto* a = find(r, "time_derivative_ratio_spread");
  const bool ok = rows_converged(r) && a && a->applicable && a->passed;
  return {ok, fmt("ratio max/min %.4g (limit 10)", a ? a->value : NAN)};
}

Outcome fractional_floor() {
  const auto r = run_fractional_check(SweepSpec::defaults("mms_smooth", 4.0, 0.0));
  const auto* a = find(r, "nikolskii_theta_floor");
  const bool floor_ok = rows_converged(r) && a && a->passed;

  const SpaceTimeGrid g{1.0, 64, 0.0, 0.16, 16};
  const Cylinder cyl{{0.5, 0.5}, 0.16, 0.3};
  const std::vector<int> cells{1, 2, 4, 8};
  std::vector<double> shifts;
  for (int k : cells) shifts.push_back(k * g.h());
  const auto fit = nikolskii_fit(degen::testing::sign_trajectory(g), cyl, 2.0, shifts);
  const double exact = degen::testing::sign_theta_by_counting(g, cyl, cells, 2.0);
  const bool sign_ok = std::abs(fit.theta - 0.5) <= 0.05 && std::abs(fit.raw_slope - exact) <= 1e-12;
  return {floor_ok && sign_ok,
          fmt("p=4 theta %.4f (floor %.2f); sign field theta %.4f, direct count %.4f (target 0.5 +- 0.05)",
              a ? a->value : NAN, a ? a->threshold : NAN, fit.theta, exact)};
}

Outcome seminorm_oracles() {
  const Mesh m{64, 1.0 / 64};
  const auto ramp = ScalarField::sample(m, [](double x, double) { return degen::testing::ramp(x); });
  SmoothnessOrder o;
  o.s = 0.5;
  o.q = 2.0;
  const double value = gagliardo_seminorm(ramp, o);
  const double oracle = degen::testing::ramp_gagliardo_oracle(512);
  const double rel = std::abs(value - oracle) / oracle;

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Mesh r{31, 1.0 / 31};
  double leibniz = 0.0, sbp = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField f(r), g(r), fg(r), v(r);
    for (std::size_t k = 0; k < f.values().size(); ++k) {
      f.values()[k] = u(rng);
      g.values()[k] = u(rng);
      fg.values()[k] = f.values()[k] * g.values()[k];
    }
    const int dir = trial % 2, shift = 1 + trial % 5;
    const auto dfg = finite_difference(fg, dir, shift * r.h);
    const auto df = finite_difference(f, dir, shift * r.h);
    const auto dg = finite_difference(g, dir, shift * r.h);
    for (int j = 0; j < r.side(); ++j) {
      for (int i = 0; i < r.side(); ++i) {
        if (!dfg.valid[static_cast<std::size_t>(r.node(i, j))]) continue;
        const double fs = f(i + (dir == 0 ? shift : 0), j + (dir == 1 ? shift : 0));
        leibniz = std::max(leibniz, std::abs(dfg.tau(i, j) - (fs * dg.tau(i, j) + g(i, j) * df.tau(i, j))));
      }
    }
    VectorField field(r);
    for (int k = 0; k < field.sample_count(); ++k) field[k] = {u(rng), u(rng)};
    for (int j = 0; j < r.side(); ++j) {
      for (int i = 0; i < r.side(); ++i) v(i, j) = r.on_boundary(i, j) ? 0.0 : u(rng);
    }
    const double lhs = inner_product(discrete_divergence(field), v);
    const double rhs = -inner_product(field, discrete_gradient(v));
    sbp = std::max(sbp, std::abs(lhs - rhs));
  }
  const bool ok = rel <= 0.05 && leibniz <= 1e-12 && sbp <= 1e-12;
  return {ok, fmt("ramp seminorm %.5f vs N=512 oracle %.5f (rel %.2e, limit 5e-2); "
                  "Leibniz max error %.1e, summation by parts max error %.1e (limit 1e-12)",
                  value, oracle, rel, leibniz, sbp)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"inequality campaign", inequality_campaign},
      {"G-profile oracles", g_profile_oracles},
      {"flux consistency", flux_consistency},
      {"heat convergence", heat_convergence},
      {"degenerate stationarity", degenerate_stationarity},
      {"cone sweep", cone_sweep},
      {"energy uniformity", energy_uniformity},
      {"time derivative", time_derivative},
      {"fractional floor", fractional_floor},
      {"seminorm oracles", seminorm_oracles},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.passed) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", out.passed ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
