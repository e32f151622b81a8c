#include "degen/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "degen/errors.hpp"

namespace degen {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  Trajectory out = a;
  for (std::size_t k = 0; k < out.levels.size(); ++k) {
    auto& v = out.levels[k].values();
    const auto& w = b.levels[k].values();
    for (std::size_t q = 0; q < v.size(); ++q) v[q] -= w[q];
  }
  return out;
}

VectorTrajectory difference(const VectorTrajectory& a, const VectorTrajectory& b) {
  VectorTrajectory out = a;
  for (std::size_t k = 0; k < out.levels.size(); ++k) {
    for (int q = 0; q < out.levels[k].sample_count(); ++q) out.levels[k][q] -= b.levels[k][q];
  }
  return out;
}

Trajectory backward_time_difference(const Trajectory& u) {
  Trajectory out = u;
  const double tau = u.grid.tau();
  std::fill(out.levels[0].values().begin(), out.levels[0].values().end(), 0.0);
  for (std::size_t k = 1; k < u.levels.size(); ++k) {
    auto& v = out.levels[k].values();
    const auto& prev = u.levels[k - 1].values();
    for (std::size_t q = 0; q < v.size(); ++q) v[q] = (v[q] - prev[q]) / tau;
  }
  return out;
}

Trajectory as_trajectory(const SpaceTimeGrid& grid, std::vector<ScalarField> levels) {
  Trajectory t;
  t.grid = grid;
  t.levels = std::move(levels);
  return t;
}

// Every level of the coarse grid taken from a doubled (space and time) grid.
Trajectory restrict_to_coarse(const Trajectory& fine, const SpaceTimeGrid& coarse) {
  Trajectory out;
  out.grid = coarse;
  const Mesh m = mesh_of(coarse);
  for (int k = 0; k <= coarse.steps; ++k) {
    const ScalarField& f = fine.levels[static_cast<std::size_t>(2 * k)];
    ScalarField c(m);
    for (int j = 0; j < m.side(); ++j) {
      for (int i = 0; i < m.side(); ++i) c(i, j) = f(2 * i, 2 * j);
    }
    out.levels.push_back(std::move(c));
  }
  return out;
}

void require_degenerate_free(const SweepSpec& spec, const char* what) {
  if (spec.lambda != 0.0 || !(spec.p > 2.0)) {
    throw ConfigError(std::string(what) + " requires p > 2 and lambda = 0");
  }
}

SweepAssertion spread_assertion(const std::string& name, const std::vector<double>& values,
                                double threshold, double negligible) {
  SweepAssertion a;
  a.name = name;
  a.threshold = threshold;
  double biggest = 0.0;
  for (double v : values) biggest = std::max(biggest, std::abs(v));
  if (values.empty() || biggest <= negligible) {
    a.applicable = false;
    a.value = kNaN;
    std::ostringstream os;
    os << "all values <= " << negligible;
    a.detail = os.str();
    return a;
  }
  a.value = spread(values);
  a.passed = std::isfinite(a.value) && a.value <= threshold;
  a.detail = "max/min across the sweep";
  return a;
}

SweepAssertion slope_assertion(const std::string& name, const std::vector<double>& eps,
                               const std::vector<double>& values, double threshold,
                               double negligible) {
  SweepAssertion a;
  a.name = name;
  a.threshold = threshold;
  double biggest = 0.0;
  for (double v : values) biggest = std::max(biggest, std::abs(v));
  if (values.empty() || biggest <= negligible) {
    a.applicable = false;
    a.value = kNaN;
    std::ostringstream os;
    os << "all values <= " << negligible;
    a.detail = os.str();
    return a;
  }
  a.value = tail_slope(eps, values);
  a.passed = std::isfinite(a.value) && a.value >= threshold;
  a.detail = "log-log slope against eps over the last three rows";
  return a;
}

std::vector<double> column(const SweepReport& r, double SweepRow::*field) {
  std::vector<double> out;
  for (const auto& row : r.rows) {
    if (row.converged) out.push_back(row.*field);
  }
  return out;
}

std::vector<double> eps_column(const SweepReport& r) { return column(r, &SweepRow::eps); }

SweepReport run_rows(SweepKind kind, const SweepSpec& spec) {
  if (auto bad = spec.violations(); !bad.empty()) throw ConfigValidationError(std::move(bad));
  SweepReport report;
  report.kind = kind;
  report.spec = spec;
  report.rows.resize(spec.eps_list.size());
  if (spec.eps_list.empty()) return report;
  const Trajectory reference = reference_solution(spec);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < spec.eps_list.size(); k = next++) {
      report.rows[k] = evaluate_row(spec, spec.eps_list[k], reference);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.eps_list.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& row : report.rows) {
    if (!row.converged) {
      report.assertions.push_back({"row eps=" + std::to_string(row.eps), kNaN, kNaN, true, false,
                                   row.error});
    }
  }
  return report;
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::energy: return "energy";
    case SweepKind::comparison: return "comparison";
    case SweepKind::sobolev: return "sobolev";
    case SweepKind::time_derivative: return "time-derivative";
    case SweepKind::fractional: return "fractional";
  }
  return "unknown";
}

SweepKind sweep_kind_from_string(const std::string& name) {
  for (auto k : {SweepKind::energy, SweepKind::comparison, SweepKind::sobolev,
                 SweepKind::time_derivative, SweepKind::fractional}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown sweep kind '" + name + "'");
}

DegenParams SweepSpec::params(double eps) const {
  return alpha ? DegenParams(p, lambda, *alpha, eps) : DegenParams(p, lambda, eps);
}

Cylinder SweepSpec::cylinder(double radius) const {
  return Cylinder{center, vertex_time.value_or(grid.t_end), radius};
}

std::vector<std::string> SweepSpec::violations() const {
  std::vector<std::string> out = grid.violations();
  const auto& names = catalog_names();
  if (std::find(names.begin(), names.end(), problem) == names.end()) {
    out.push_back("unknown problem '" + problem + "'");
  }
  const double a = alpha.value_or(lambda > 0.0 && p >= 2.0 ? default_alpha(p, lambda) : 0.0);
  for (auto& v : DegenParams::violations(p, lambda, a, 0.0)) out.push_back(v);
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0 && eps_list[k] <= 1.0)) out.emplace_back("eps values must lie in (0, 1]");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) out.emplace_back("eps_list must be strictly decreasing");
  }
  if (!(radius_r > 0.0 && radius_r < radius_rho && radius_rho < radius_R)) {
    out.emplace_back("cylinder radii must satisfy 0 < r < rho < R");
  }
  if (out.empty()) {
    for (auto& v : cylinder(radius_R).violations(grid)) out.push_back("Q_R: " + v);
  }
  for (int c : nikolskii_shift_cells) {
    if (c <= 0) out.emplace_back("nikolskii shifts must be positive cell counts");
  }
  if (threads < 1) out.emplace_back("threads must be >= 1");
  for (auto& v : newton.violations()) out.push_back(v);
  return out;
}

SweepSpec SweepSpec::defaults(const std::string& problem, double p, double lambda, int cells,
                              int steps, double length) {
  SweepSpec s;
  s.problem = problem;
  s.p = p;
  s.lambda = lambda;
  s.radius_R = 0.4 * length;
  s.radius_rho = 0.3 * length;
  s.radius_r = 0.2 * length;
  s.center = {0.5 * length, 0.5 * length};
  s.grid = SpaceTimeGrid{length, cells, 0.0, s.radius_R * s.radius_R, steps};
  return s;
}

bool SweepReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const SweepAssertion& a) { return a.passed; });
}

Trajectory reference_solution(const SweepSpec& spec) {
  const ProblemSpec exact = manufactured_problem(spec.problem, spec.grid, spec.params(0.0));
  if (exact.exact) return sample_reference(exact);
  SpaceTimeGrid fine = spec.grid;
  fine.cells *= 2;
  fine.steps *= 2;
  const ProblemSpec ps = manufactured_problem(spec.problem, fine, spec.params(1e-6));
  return restrict_to_coarse(solve_cauchy_dirichlet(ps, spec.newton).trajectory, spec.grid);
}

SweepRow evaluate_row(const SweepSpec& spec, double eps, const Trajectory& reference) {
  const auto start = std::chrono::steady_clock::now();
  SweepRow row;
  row.eps = eps;
  const DegenParams params = spec.params(eps);
  const ProblemSpec ps = manufactured_problem(spec.problem, spec.grid, params);
  Solution sol;
  try {
    sol = solve_cauchy_dirichlet(ps, spec.newton);
  } catch (const NonConvergence& e) {
    row.converged = false;
    row.error = e.what();
    for (double* f : {&row.energy_lhs, &row.energy_bound, &row.comparison_lhs,
                      &row.comparison_model, &row.v_l2, &row.sobolev, &row.sobolev_bound,
                      &row.mollification_error, &row.time_derivative,
                      &row.time_derivative_rhs, &row.nikolskii_theta}) {
      *f = kNaN;
    }
    return row;
  }
  const Trajectory& u = sol.trajectory;
  row.newton_iterations = sol.report.total_iterations();

  const double p = spec.p, pc = p / (p - 1.0), lambda = spec.lambda;
  const Cylinder qR = spec.cylinder(spec.radius_R);
  const Cylinder qrho2 = spec.cylinder(0.5 * spec.radius_rho);
  const Cylinder qr = spec.cylinder(spec.radius_r);
  const Cylinder qr2 = spec.cylinder(0.5 * spec.radius_r);
  const Ball bR{qR.center, qR.radius};

  const VectorTrajectory du = gradient_trajectory(u);
  const VectorTrajectory du_ref = gradient_trajectory(reference);
  const double du_eps_norm = lp_norm_cylinder(du, qR, p);
  const double du_ref_norm = lp_norm_cylinder(du_ref, qR, p);
  const double sup_diff = sup_l2_in_time(difference(u, reference), bR, qR.t_low(), qR.vertex_time);

  row.energy_lhs = std::pow(du_eps_norm, p) + sup_diff * sup_diff;
  row.energy_bound = std::pow(du_ref_norm, p) + std::pow(lambda, p) + 1.0;

  const VectorTrajectory v = v_trajectory(u, params);
  const VectorTrajectory v_ref = v_trajectory(reference, params);
  const double v_diff = lp_norm_cylinder(difference(v, v_ref), qR, 2.0);
  row.comparison_lhs = sup_diff * sup_diff + v_diff * v_diff;
  const double v_norm = lp_norm_cylinder(v, qR, 2.0);
  row.v_l2 = v_norm * v_norm;

  ProblemSpec raw = ps;
  raw.mollify = false;
  const Trajectory f = as_trajectory(spec.grid, source_levels(raw));
  const Trajectory f_eps = as_trajectory(spec.grid, source_levels(ps));
  row.mollification_error = lp_norm_cylinder(difference(f, f_eps), qR, pc);
  row.comparison_model =
      eps * (std::pow(du_ref_norm, p) + 1.0) + row.mollification_error * (du_ref_norm + lambda + 1.0);

  row.sobolev = grad_l2_of_field(v, qrho2);
  const double rho = spec.radius_rho;
  if (p > 2.0) {
    const double fb = parabolic_besov_norm(f, qR, (p - 2.0) / p, pc);
    row.sobolev_bound = (std::pow(du_ref_norm, p) + du_ref_norm * du_ref_norm + std::pow(lambda, p) +
                         lambda * lambda + 1.0) / (rho * rho) + std::pow(fb, pc);
    if (lambda == 0.0) {
      const double fl = lp_norm_cylinder(f, qR, pc);
      const double d = du_eps_norm;
      row.time_derivative_rhs =
          (std::pow(d, p - 1.0) + std::pow(d, p / 2.0) + std::pow(d, (p - 2.0) / 2.0)) / rho +
          std::pow(d, (p - 2.0) / 2.0) * std::pow(fb, pc / 2.0) + fl;
    } else {
      row.time_derivative_rhs = kNaN;
    }
  } else {
    const double f2 = lp_norm_cylinder(f, qR, 2.0);
    row.sobolev_bound = (du_ref_norm * du_ref_norm + lambda * lambda + 1.0) / (rho * rho) + f2 * f2 + 1.0;
    row.time_derivative_rhs = kNaN;
  }
  row.time_derivative = lp_norm_cylinder(backward_time_difference(u), qr2, pc);

  std::vector<double> shifts;
  for (int c : spec.nikolskii_shift_cells) shifts.push_back(c * spec.grid.h());
  try {
    row.nikolskii_theta = nikolskii_fit(du, qr, p, shifts).theta;
  } catch (const InsufficientData&) {
    row.nikolskii_theta = kNaN;
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

double tail_slope(const std::vector<double>& eps, const std::vector<double>& values,
                  std::size_t tail) {
  const std::size_t n = std::min(eps.size(), values.size());
  const std::size_t first = n > tail ? n - tail : 0;
  std::vector<double> xs, ys;
  for (std::size_t k = first; k < n; ++k) {
    if (values[k] > 0.0 && eps[k] > 0.0 && std::isfinite(values[k])) {
      xs.push_back(std::log(eps[k]));
      ys.push_back(std::log(values[k]));
    }
  }
  if (xs.size() < 2) return kNaN;
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

double spread(const std::vector<double>& values) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool any = false;
  for (double v : values) {
    if (!std::isfinite(v)) return kNaN;
    if (v <= 0.0) return std::numeric_limits<double>::infinity();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    any = true;
  }
  return any ? hi / lo : kNaN;
}

SweepReport run_energy_sweep(const SweepSpec& spec) {
  SweepReport r = run_rows(SweepKind::energy, spec);
  std::vector<double> ratio;
  for (const auto& row : r.rows) {
    if (row.converged) ratio.push_back(row.energy_lhs / row.energy_bound);
  }
  if (!ratio.empty()) r.assertions.push_back(spread_assertion("energy_ratio_spread", ratio, 4.0, 0.0));
  return r;
}

SweepReport run_comparison_sweep(const SweepSpec& spec) {
  SweepReport r = run_rows(SweepKind::comparison, spec);
  if (r.rows.empty()) return r;
  const auto eps = eps_column(r);
  r.assertions.push_back(
      slope_assertion("comparison_lhs_slope", eps, column(r, &SweepRow::comparison_lhs), 0.8, 1e-10));
  r.assertions.push_back(slope_assertion("v_l2_slope", eps, column(r, &SweepRow::v_l2), 0.8, 0.0));
  return r;
}

SweepReport run_sobolev_sweep(const SweepSpec& spec) {
  SweepReport r = run_rows(SweepKind::sobolev, spec);
  if (r.rows.empty()) return r;
  r.assertions.push_back(spread_assertion("sobolev_spread", column(r, &SweepRow::sobolev), 10.0, 1e-10));
  return r;
}

SweepReport run_time_derivative_check(const SweepSpec& spec) {
  require_degenerate_free(spec, "time-derivative check");
  SweepReport r = run_rows(SweepKind::time_derivative, spec);
  if (r.rows.empty()) return r;
  std::vector<double> ratio;
  bool all_zero = true;
  for (const auto& row : r.rows) {
    if (!row.converged) continue;
    if (row.time_derivative > 1e-8) all_zero = false;
    ratio.push_back(row.time_derivative_rhs > 0.0 ? row.time_derivative / row.time_derivative_rhs : kNaN);
  }
  if (all_zero) {
    r.assertions.push_back({"time_derivative_ratio_spread", kNaN, 10.0, false, true,
                            "time derivative <= 1e-8 in every row"});
  } else {
    r.assertions.push_back(spread_assertion("time_derivative_ratio_spread", ratio, 10.0, 0.0));
  }
  return r;
}

SweepReport run_fractional_check(const SweepSpec& spec) {
  require_degenerate_free(spec, "fractional check");
  SweepReport r = run_rows(SweepKind::fractional, spec);
  if (r.rows.empty()) return r;
  const SweepRow& last = r.rows.back();
  SweepAssertion a;
  a.name = "nikolskii_theta_floor";
  a.value = last.nikolskii_theta;
  a.threshold = 2.0 / spec.p - 0.1;
  a.passed = last.converged && std::isfinite(a.value) && a.value >= a.threshold;
  a.detail = "theta of Du at the smallest eps against 2/p - 0.1";
  r.assertions.push_back(a);
  return r;
}

SweepReport run_sweep(SweepKind kind, const SweepSpec& spec) {
  switch (kind) {
    case SweepKind::energy: return run_energy_sweep(spec);
    case SweepKind::comparison: return run_comparison_sweep(spec);
    case SweepKind::sobolev: return run_sobolev_sweep(spec);
    case SweepKind::time_derivative: return run_time_derivative_check(spec);
    case SweepKind::fractional: return run_fractional_check(spec);
  }
  throw ConfigError("unknown sweep kind");
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  out << "eps,converged,energy_lhs,energy_bound,energy_ratio,comparison_lhs,comparison_model,"
         "v_l2,sobolev,sobolev_bound,mollification_error,time_derivative,time_derivative_rhs,"
         "nikolskii_theta,newton_iterations,error\n";
  out << std::setprecision(10);
  for (const auto& r : report.rows) {
    out << r.eps << ',' << (r.converged ? 1 : 0) << ',' << r.energy_lhs << ',' << r.energy_bound
        << ',' << r.energy_lhs / r.energy_bound << ',' << r.comparison_lhs << ','
        << r.comparison_model << ',' << r.v_l2 << ',' << r.sobolev << ',' << r.sobolev_bound << ','
        << r.mollification_error << ',' << r.time_derivative << ',' << r.time_derivative_rhs << ','
        << r.nikolskii_theta << ',' << r.newton_iterations << ",\""
        << r.error << "\"\n";
  }
}

void write_sweep_manifest(std::ostream& out, const SweepReport& report) {
  const SweepSpec& s = report.spec;
  nlohmann::json j;
  j["kind"] = to_string(report.kind);
  j["problem"] = s.problem;
  j["eps_list"] = s.eps_list;
  j["grid"] = {{"length", s.grid.length},   {"cells", s.grid.cells}, {"t_begin", s.grid.t_begin},
               {"t_end", s.grid.t_end},     {"steps", s.grid.steps}};
  j["params"] = {{"p", s.p}, {"lambda", s.lambda}, {"alpha", s.params(0.0).alpha()}};
  j["cylinders"] = {{"center", {s.center.x(), s.center.y()}},
                    {"vertex_time", s.vertex_time.value_or(s.grid.t_end)},
                    {"r", s.radius_r}, {"rho", s.radius_rho}, {"R", s.radius_R}};
  j["newton"] = {{"residual_tol", s.newton.residual_tol}, {"max_iters", s.newton.max_iters},
                 {"min_step", s.newton.min_step},         {"linear_tol", s.newton.linear_tol}};
  j["nikolskii_shift_cells"] = s.nikolskii_shift_cells;
  auto& arr = j["assertions"] = nlohmann::json::array();
  for (const auto& a : report.assertions) {
    arr.push_back({{"name", a.name},
                   {"value", std::isfinite(a.value) ? nlohmann::json(a.value) : nlohmann::json()},
                   {"threshold", std::isfinite(a.threshold) ? nlohmann::json(a.threshold) : nlohmann::json()},
                   {"applicable", a.applicable},
                   {"passed", a.passed},
                   {"detail", a.detail}});
  }
  j["passed"] = report.passed();
  out << j.dump(2) << "\n";
}

void write_sweep_summary(std::ostream& out, const SweepReport& report) {
  out << to_string(report.kind) << " sweep on " << report.spec.problem << " (" << report.rows.size()
      << " rows)\n";
  for (const auto& a : report.assertions) {
    out << "  " << a.name << ": ";
    if (!a.applicable) {
      out << "not applicable (" << a.detail << ")\n";
      continue;
    }
    out << a.value << " vs " << a.threshold << " -> " << (a.passed ? "ok" : "FAILED") << "\n";
  }
  out << (report.passed() ? "PASS" : "FAIL") << "\n";
}

}  // namespace degen
