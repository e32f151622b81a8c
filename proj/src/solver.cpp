#include "degen/solver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "degen/core_maps.hpp"
#include "degen/errors.hpp"

namespace degen {
namespace {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Nodes of triangle `tri` in cell (i, j) and the derivative of the triangle
// gradient with respect to each node value, in units of 1/h.
struct TriangleNodes {
  int node[3];
  Vec2 coef[3];
};

TriangleNodes triangle_nodes(const Mesh& m, int i, int j, int tri) {
  if (tri == 0) {
    return {{m.node(i, j), m.node(i + 1, j), m.node(i, j + 1)},
            {Vec2(-1, -1), Vec2(1, 0), Vec2(0, 1)}};
  }
  return {{m.node(i + 1, j + 1), m.node(i, j + 1), m.node(i + 1, j)},
          {Vec2(1, 1), Vec2(-1, 0), Vec2(0, -1)}};
}

std::vector<int> interior_index(const Mesh& m, int& count) {
  std::vector<int> idx(static_cast<std::size_t>(m.node_count()), -1);
  count = 0;
  for (int j = 1; j < m.cells; ++j) {
    for (int i = 1; i < m.cells; ++i) idx[static_cast<std::size_t>(m.node(i, j))] = count++;
  }
  return idx;
}

Eigen::SparseMatrix<double> assemble_jacobian(const ScalarField& u, const DegenParams& params,
                                              double tau, const std::vector<int>& idx,
                                              int unknowns) {
  const Mesh& m = u.mesh();
  const VectorField grad = discrete_gradient(u);
  const double scale = 0.5 / (m.h * m.h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(unknowns + 18 * m.cells * m.cells));
  for (int k = 0; k < unknowns; ++k) trip.emplace_back(k, k, 1.0 / tau);
  for (int j = 0; j < m.cells; ++j) {
    for (int i = 0; i < m.cells; ++i) {
      for (int tri = 0; tri < 2; ++tri) {
        const Mat2 J = planar::flux_jacobian(grad.at(i, j, tri), params);
        const TriangleNodes t = triangle_nodes(m, i, j, tri);
        for (int a = 0; a < 3; ++a) {
          const int ra = idx[static_cast<std::size_t>(t.node[a])];
          if (ra < 0) continue;
          const Vec2 Jc = J * t.coef[a];
          for (int b = 0; b < 3; ++b) {
            const int rb = idx[static_cast<std::size_t>(t.node[b])];
            if (rb < 0) continue;
            trip.emplace_back(ra, rb, scale * t.coef[b].dot(Jc));
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> A(unknowns, unknowns);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

void set_boundary(ScalarField& u, const ScalarField& from) {
  const Mesh& m = u.mesh();
  for (int j = 0; j < m.side(); ++j) {
    for (int i = 0; i < m.side(); ++i) {
      if (m.on_boundary(i, j)) u(i, j) = from(i, j);
    }
  }
}

}  // namespace

std::vector<std::string> NewtonConfig::violations() const {
  std::vector<std::string> out;
  if (!(residual_tol > 0.0)) out.emplace_back("newton residual_tol must be > 0");
  if (max_iters < 0) out.emplace_back("newton max_iters must be >= 0");
  if (!(min_step > 0.0 && min_step <= 1.0)) out.emplace_back("newton min_step must lie in (0, 1]");
  if (!(linear_tol > 0.0)) out.emplace_back("newton linear_tol must be > 0");
  if (linear_max_iters < 1) out.emplace_back("newton linear_max_iters must be >= 1");
  return out;
}

int SolveReport::total_iterations() const {
  int n = 0;
  for (const auto& s : steps) n += s.iterations;
  return n;
}

double SolveReport::max_residual() const {
  double r = 0.0;
  for (const auto& s : steps) r = std::max(r, s.residual);
  return r;
}

ScalarField implicit_euler_residual(const ScalarField& u_next, const ScalarField& u_curr,
                                    const ScalarField& f_level, const DegenParams& params,
                                    double tau) {
  const Mesh& m = u_next.mesh();
  VectorField fl = discrete_gradient(u_next);
  for (int k = 0; k < fl.sample_count(); ++k) fl[k] = planar::flux(fl[k], params);
  ScalarField r = discrete_divergence(fl);
  for (int j = 0; j < m.side(); ++j) {
    for (int i = 0; i < m.side(); ++i) {
      r(i, j) = m.on_boundary(i, j)
                    ? 0.0
                    : (u_next(i, j) - u_curr(i, j)) / tau - r(i, j) - f_level(i, j);
    }
  }
  return r;
}

double residual_norm(const ScalarField& residual) {
  const Mesh& m = residual.mesh();
  double sum = 0.0;
  for (int j = 1; j < m.cells; ++j) {
    for (int i = 1; i < m.cells; ++i) sum += residual(i, j) * residual(i, j);
  }
  return std::sqrt(sum) * m.h;
}

ScalarField solve_timestep(const ScalarField& u_curr, const ScalarField& f_level,
                           const ScalarField& boundary_next, const DegenParams& params,
                           double tau, const NewtonConfig& newton,
                           StepDiagnostics* diagnostics, bool warm_start) {
  if (!(params.eps() > 0.0)) throw InvalidInput("solve_timestep requires eps > 0");
  if (!(tau > 0.0)) throw InvalidInput("solve_timestep requires tau > 0");
  if (const auto bad = newton.violations(); !bad.empty()) throw InvalidInput(bad.front());
  const Mesh& m = u_curr.mesh();
  if (!(f_level.mesh() == m) || !(boundary_next.mesh() == m)) {
    throw InvalidInput("solve_timestep: mesh mismatch");
  }
  int unknowns = 0;
  const auto idx = interior_index(m, unknowns);

  ScalarField u = warm_start ? boundary_next : u_curr;
  set_boundary(u, boundary_next);
  ScalarField r = implicit_euler_residual(u, u_curr, f_level, params, tau);
  double rn = residual_norm(r);
  StepDiagnostics diag;
  diag.residual_history.push_back(rn);

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(newton.linear_tol);
  cg.setMaxIterations(newton.linear_max_iters);

  while (!(rn <= newton.residual_tol)) {
    if (!std::isfinite(rn)) throw NonConvergence("residual is not finite", rn);
    if (diag.iterations >= newton.max_iters) {
      throw NonConvergence("newton did not reach residual_tol in max_iters", rn);
    }
    const auto A = assemble_jacobian(u, params, tau, idx, unknowns);
    Eigen::VectorXd rhs(unknowns);
    for (int q = 0; q < m.node_count(); ++q) {
      if (idx[static_cast<std::size_t>(q)] >= 0) {
        rhs[idx[static_cast<std::size_t>(q)]] = -r.values()[static_cast<std::size_t>(q)];
      }
    }
    cg.compute(A);
    if (cg.info() != Eigen::Success) throw NonConvergence("preconditioner setup failed", rn);
    const Eigen::VectorXd du = cg.solve(rhs);
    diag.linear_iterations += static_cast<int>(cg.iterations());

    double step = 1.0;
    bool accepted = false;
    while (step >= newton.min_step) {
      ScalarField trial = u;
      for (int q = 0; q < m.node_count(); ++q) {
        const int k = idx[static_cast<std::size_t>(q)];
        if (k >= 0) trial.values()[static_cast<std::size_t>(q)] += step * du[k];
      }
      ScalarField tr = implicit_euler_residual(trial, u_curr, f_level, params, tau);
      const double tn = residual_norm(tr);
      if (tn < rn) {
        u = std::move(trial);
        r = std::move(tr);
        rn = tn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++diag.iterations;
    diag.residual_history.push_back(rn);
    if (!accepted) throw NonConvergence("line search stalled below min_step", rn);
  }
  diag.residual = rn;
  if (diagnostics) *diagnostics = std::move(diag);
  return u;
}

ScalarField solve_timestep(const ScalarField& u_curr, const ScalarField& f_level,
                           const ProblemSpec& spec, int level, const NewtonConfig& newton,
                           StepDiagnostics* diagnostics) {
  const double t = spec.grid.time(level);
  const ScalarField bnd = ScalarField::sample(
      u_curr.mesh(), [&](double x, double y) { return spec.reference(x, y, t); });
  ScalarField out = solve_timestep(u_curr, f_level, bnd, spec.params, spec.grid.tau(), newton,
                                   diagnostics);
  if (diagnostics) diagnostics->step = level;
  return out;
}

Solution solve_cauchy_dirichlet(const ProblemSpec& spec, const NewtonConfig& newton) {
  const Mesh m = mesh_of(spec.grid);
  const double t0 = spec.grid.t_begin;
  return solve_cauchy_dirichlet(
      spec, ScalarField::sample(m, [&](double x, double y) { return spec.reference(x, y, t0); }),
      newton);
}

Solution solve_cauchy_dirichlet(const ProblemSpec& spec, const ScalarField& initial,
                                const NewtonConfig& newton) {
  spec.grid.validate();
  if (!spec.reference) throw InvalidInput("problem has no reference boundary data");
  const auto start = std::chrono::steady_clock::now();
  const Mesh m = mesh_of(spec.grid);
  if (!(initial.mesh() == m)) throw InvalidInput("initial slice does not match the grid");
  const auto f = source_levels(spec);
  Solution sol;
  sol.trajectory.grid = spec.grid;
  ScalarField u0 = initial;
  const double t0 = spec.grid.t_begin;
  set_boundary(u0, ScalarField::sample(m, [&](double x, double y) {
                 return spec.reference(x, y, t0);
               }));
  sol.trajectory.levels.push_back(std::move(u0));
  for (int k = 1; k <= spec.grid.steps; ++k) {
    StepDiagnostics diag;
    const auto step_start = std::chrono::steady_clock::now();
    try {
      sol.trajectory.levels.push_back(solve_timestep(
          sol.trajectory.levels.back(), f[static_cast<std::size_t>(k)], spec, k, newton, &diag));
    } catch (const NonConvergence& e) {
      throw NonConvergence(std::string(e.what()) + " at step " + std::to_string(k),
                           e.last_residual(), k);
    }
    diag.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - step_start).count();
    sol.report.steps.push_back(std::move(diag));
  }
  sol.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

double discrete_energy(const ScalarField& u, const DegenParams& params) {
  const VectorField g = discrete_gradient(u);
  double sum = 0.0;
  for (int k = 0; k < g.sample_count(); ++k) sum += planar::energy_density(g[k], params);
  return sum * g.weight();
}

void write_solve_report_csv(std::ostream& out, const SolveReport& report) {
  out << "step,newton_iterations,linear_iterations,final_residual\n";
  for (const auto& s : report.steps) {
    out << s.step << ',' << s.iterations << ',' << s.linear_iterations << ','
        << s.residual << '\n';
  }
}

}  // namespace degen
