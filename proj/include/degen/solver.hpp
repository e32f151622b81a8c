#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "degen/grid.hpp"
#include "degen/params.hpp"
#include "degen/problem.hpp"

namespace degen {

struct NewtonConfig {
  double residual_tol = 1e-9;  // grid L2 norm of the implicit-Euler residual
  int max_iters = 50;
  double min_step = 0x1p-20;   // line search halves from 1 down to this
  double linear_tol = 1e-12;   // relative residual of each conjugate-gradient solve
  int linear_max_iters = 5000;

  std::vector<std::string> violations() const;
};

struct StepDiagnostics {
  int step = 0;  // index of the level being computed
  int iterations = 0;
  int linear_iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  std::vector<double> residual_history;  // before the first and after each iteration
};

struct SolveReport {
  std::vector<StepDiagnostics> steps;
  double wall_seconds = 0.0;

  int total_iterations() const;
  double max_residual() const;
};

/// (u_next - u_curr)/tau - div flux(grad u_next) - f at interior nodes, 0 on
/// the boundary.
ScalarField implicit_euler_residual(const ScalarField& u_next, const ScalarField& u_curr,
                                    const ScalarField& f_level, const DegenParams& params,
                                    double tau);

/// Grid L2 norm over interior nodes.
double residual_norm(const ScalarField& residual);

/// One implicit Euler step. Boundary values of `u_next` are taken from
/// `boundary_next`; its interior serves only as the Newton start when
/// `warm_start` is set, otherwise u_curr's interior is used.
ScalarField solve_timestep(const ScalarField& u_curr, const ScalarField& f_level,
                           const ScalarField& boundary_next, const DegenParams& params,
                           double tau, const NewtonConfig& newton,
                           StepDiagnostics* diagnostics = nullptr, bool warm_start = false);

/// Step from level `level - 1` to `level` of `spec`, lateral data from the
/// reference at the new time.
ScalarField solve_timestep(const ScalarField& u_curr, const ScalarField& f_level,
                           const ProblemSpec& spec, int level, const NewtonConfig& newton,
                           StepDiagnostics* diagnostics = nullptr);

struct Solution {
  Trajectory trajectory;
  SolveReport report;
};

/// Marches all M steps from the reference's initial slice.
Solution solve_cauchy_dirichlet(const ProblemSpec& spec, const NewtonConfig& newton = {});

/// Same march from an explicit initial slice (its boundary is overwritten).
Solution solve_cauchy_dirichlet(const ProblemSpec& spec, const ScalarField& initial,
                                const NewtonConfig& newton = {});

/// Sum of A_eps(grad u) h^2/2 over triangles.
double discrete_energy(const ScalarField& u, const DegenParams& params);

void write_solve_report_csv(std::ostream& out, const SolveReport& report);

}  // namespace degen
