#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "degen/grid.hpp"
#include "degen/params.hpp"
#include "degen/problem.hpp"
#include "degen/seminorms.hpp"
#include "degen/solver.hpp"

namespace degen {

enum class SweepKind { energy, comparison, sobolev, time_derivative, fractional };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);

struct SweepSpec {
  std::string problem = "mms_smooth";
  std::vector<double> eps_list{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  SpaceTimeGrid grid{1.0, 48, 0.0, 0.16, 32};
  double p = 3.0;
  double lambda = 0.0;
  std::optional<double> alpha;  // default_alpha when empty
  // Nested radii r < rho < R of cylinders sharing center and vertex.
  double radius_r = 0.2;
  double radius_rho = 0.3;
  double radius_R = 0.4;
  Eigen::Vector2d center{0.5, 0.5};
  std::optional<double> vertex_time;  // grid.t_end when empty
  std::vector<int> nikolskii_shift_cells{1, 2, 4, 8};
  NewtonConfig newton;
  unsigned threads = 1;

  DegenParams params(double eps) const;
  Cylinder cylinder(double radius) const;
  std::vector<std::string> violations() const;
  /// Grid, radii and center scaled to a square of side `length`, vertex at
  /// the final time, time window (0, (0.4 L)^2).
  static SweepSpec defaults(const std::string& problem, double p, double lambda, int cells = 48,
                            int steps = 32, double length = 1.0);
};

struct SweepRow {
  double eps = 0.0;
  bool converged = true;
  std::string error;
  double energy_lhs = 0.0;            // int_{Q_R}|Du_eps|^p + sup_t ||u_eps - u||^2
  double energy_bound = 0.0;          // ||Du||^p_{L^p(Q_R)} + lambda^p + 1
  double comparison_lhs = 0.0;        // sup_t ||u_eps - u||^2 + int_{Q_R}|V(Du_eps) - V(Du)|^2
  double comparison_model = 0.0;      // eps(||Du||^p + 1) + ||f - f_eps||_{p'}(||Du|| + lambda + 1)
  double v_l2 = 0.0;                  // int_{Q_R}|V(Du_eps)|^2
  double sobolev = 0.0;               // int_{Q_{rho/2}}|D_x V(Du_eps)|^2
  double sobolev_bound = 0.0;
  double mollification_error = 0.0;   // ||f - f_eps||_{L^{p'}(Q_R)}
  double time_derivative = 0.0;       // ||d_t u_eps||_{L^{p'}(Q_{r/2})}
  double time_derivative_rhs = 0.0;
  double nikolskii_theta = 0.0;       // fit on Du_eps over Q_r with q = p
  int newton_iterations = 0;
  double seconds = 0.0;
};

struct SweepAssertion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool applicable = true;
  bool passed = true;
  std::string detail;
};

struct SweepReport {
  SweepKind kind = SweepKind::energy;
  SweepSpec spec;
  std::vector<SweepRow> rows;
  std::vector<SweepAssertion> assertions;

  bool passed() const;
};

/// The reference solution on the sweep grid: the catalog solution sampled at
/// nodes when exact, otherwise an eps = 1e-6 solve on the doubled grid
/// restricted to the coarse nodes.
Trajectory reference_solution(const SweepSpec& spec);

/// Solves at one eps and evaluates every row quantity.
SweepRow evaluate_row(const SweepSpec& spec, double eps, const Trajectory& reference);

SweepReport run_energy_sweep(const SweepSpec& spec);
SweepReport run_comparison_sweep(const SweepSpec& spec);
SweepReport run_sobolev_sweep(const SweepSpec& spec);
SweepReport run_time_derivative_check(const SweepSpec& spec);
SweepReport run_fractional_check(const SweepSpec& spec);
SweepReport run_sweep(SweepKind kind, const SweepSpec& spec);

/// Least-squares slope of log(values) against log(eps) over the last
/// `tail` rows with positive values; NaN when fewer than two remain.
double tail_slope(const std::vector<double>& eps, const std::vector<double>& values,
                  std::size_t tail = 3);

/// max/min of the values; infinity when any is <= 0, NaN when any is not
/// finite or the list is empty.
double spread(const std::vector<double>& values);

void write_sweep_csv(std::ostream& out, const SweepReport& report);
void write_sweep_manifest(std::ostream& out, const SweepReport& report);
void write_sweep_summary(std::ostream& out, const SweepReport& report);

}  // namespace degen
