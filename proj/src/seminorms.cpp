#include "degen/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "degen/core_maps.hpp"
#include "degen/errors.hpp"

namespace degen {
namespace {

using Vec2 = Eigen::Vector2d;

bool ball_inside(const SpaceTimeGrid& grid, const Vec2& c, double r, double margin) {
  const double tol = 1e-12 * grid.length;
  return c.x() - r >= margin - tol && c.y() - r >= margin - tol &&
         c.x() + r <= grid.length - margin + tol && c.y() + r <= grid.length - margin + tol;
}

bool in_ball(double x, double y, const Vec2& c, double r) {
  const double dx = x - c.x(), dy = y - c.y();
  return dx * dx + dy * dy <= r * r * (1.0 + 1e-12);
}

void check_cylinder(const SpaceTimeGrid& grid, const Cylinder& cyl) {
  const auto bad = cyl.violations(grid);
  if (!bad.empty()) throw InvalidRegion(bad.front());
}

int shift_in_cells(double shift, double h) {
  const double k = shift / h;
  const double r = std::round(k);
  if (r == 0.0 || std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(r))) {
    throw InvalidShift("shift " + std::to_string(shift) + " is not a nonzero multiple of " +
                       std::to_string(h));
  }
  return static_cast<int>(r);
}

// Bilinear interpolation of node data, zero outside [0, L]^2.
double bilinear(const ScalarField& v, double x, double y) {
  const Mesh& m = v.mesh();
  const double gx = x / m.h, gy = y / m.h;
  if (gx < 0.0 || gy < 0.0 || gx > m.cells || gy > m.cells) return 0.0;
  const int i = std::min(static_cast<int>(gx), m.cells - 1);
  const int j = std::min(static_cast<int>(gy), m.cells - 1);
  const double fx = gx - i, fy = gy - j;
  return (1 - fx) * (1 - fy) * v(i, j) + fx * (1 - fy) * v(i + 1, j) +
         (1 - fx) * fy * v(i, j + 1) + fx * fy * v(i + 1, j + 1);
}

double node_value_or_zero(const ScalarField& v, int i, int j) {
  const int n = v.mesh().cells;
  if (i < 0 || j < 0 || i > n || j > n) return 0.0;
  return v(i, j);
}

ScalarField masked(const ScalarField& f, const std::optional<Ball>& region) {
  if (!region) return f;
  ScalarField out(f.mesh());
  const double h = f.mesh().h;
  for (int j = 0; j < f.mesh().side(); ++j) {
    for (int i = 0; i < f.mesh().side(); ++i) {
      if (in_ball(i * h, j * h, region->center, region->radius)) out(i, j) = f(i, j);
    }
  }
  return out;
}

// Increment integrals below rounding level relative to int |F|^q count as zero.
NikolskiiFit fit_slope(const std::vector<double>& shifts, const std::vector<double>& sums,
                       double q, double field_integral) {
  NikolskiiFit fit;
  fit.shifts = shifts;
  fit.integrals = sums;
  const double floor = std::pow(1e-12, q) * field_integral;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    if (sums[k] > floor) {
      xs.push_back(q * std::log(shifts[k]));
      ys.push_back(std::log(sums[k]));
    }
  }
  if (xs.empty()) {
    fit.degenerate = true;
    fit.theta = 1.0;
    fit.raw_slope = 1.0;
    return fit;
  }
  if (xs.size() < 2) throw InsufficientData("nikolskii_fit needs at least 2 usable shifts");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / n;
    my += ys[k] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  if (!(sxx > 0.0)) throw InsufficientData("nikolskii_fit needs at least 2 distinct shifts");
  fit.raw_slope = sxy / sxx;
  fit.theta = std::clamp(fit.raw_slope, 0.0, 1.0);
  return fit;
}

}  // namespace

std::vector<std::string> Cylinder::violations(const SpaceTimeGrid& grid) const {
  std::vector<std::string> out;
  if (!(radius > 0.0)) out.emplace_back("cylinder radius must be > 0");
  if (!ball_inside(grid, center, radius, 0.0)) out.emplace_back("cylinder ball leaves the grid square");
  const double tol = 1e-9 * grid.tau();
  if (t_low() < grid.t_begin - tol || vertex_time > grid.t_end + tol) {
    out.emplace_back("cylinder time interval leaves the grid time window");
  }
  return out;
}

std::vector<std::string> SmoothnessOrder::violations() const {
  std::vector<std::string> out;
  if (!(s > 0.0 && s < 1.0)) out.emplace_back("smoothness s must lie in (0, 1)");
  if (!(p >= 1.0) || std::isinf(p)) out.emplace_back("integrability p must lie in [1, inf)");
  if (!(q >= 1.0)) out.emplace_back("outer exponent q must be >= 1");
  if (!(cutoff > 0.0)) out.emplace_back("increment cutoff must be > 0");
  if (shells_per_decade < 1) out.emplace_back("shells_per_decade must be >= 1");
  if (angles < 1) out.emplace_back("angles must be >= 1");
  return out;
}

std::vector<int> cylinder_levels(const SpaceTimeGrid& grid, const Cylinder& cyl) {
  check_cylinder(grid, cyl);
  const double tol = 1e-9 * grid.tau();
  std::vector<int> out;
  for (int k = 0; k <= grid.steps; ++k) {
    const double t = grid.time(k);
    if (t > cyl.t_low() + tol && t <= cyl.vertex_time + tol) out.push_back(k);
  }
  if (out.empty()) throw InvalidRegion("cylinder contains no time level");
  return out;
}

double lp_norm_cylinder(const Trajectory& field, const Cylinder& cyl, double p) {
  if (!(p >= 1.0)) throw InvalidInput("lp_norm_cylinder: p must be >= 1");
  const Mesh m = field.mesh();
  double sum = 0.0;
  for (int k : cylinder_levels(field.grid, cyl)) {
    const ScalarField& f = field.levels[static_cast<std::size_t>(k)];
    for (int j = 0; j < m.side(); ++j) {
      for (int i = 0; i < m.side(); ++i) {
        if (in_ball(i * m.h, j * m.h, cyl.center, cyl.radius)) sum += std::pow(std::abs(f(i, j)), p);
      }
    }
  }
  return std::pow(sum * m.h * m.h * field.grid.tau(), 1.0 / p);
}

double lp_norm_cylinder(const VectorTrajectory& field, const Cylinder& cyl, double p) {
  if (!(p >= 1.0)) throw InvalidInput("lp_norm_cylinder: p must be >= 1");
  double sum = 0.0;
  double weight = 0.0;
  for (int k : cylinder_levels(field.grid, cyl)) {
    const VectorField& f = field.levels[static_cast<std::size_t>(k)];
    weight = f.weight();
    const int n = f.mesh().cells;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (int tri = 0; tri < 2; ++tri) {
          const Vec2 c = f.centroid(i, j, tri);
          if (in_ball(c.x(), c.y(), cyl.center, cyl.radius)) sum += std::pow(f.at(i, j, tri).norm(), p);
        }
      }
    }
  }
  return std::pow(sum * weight * field.grid.tau(), 1.0 / p);
}

double sup_l2_in_time(const Trajectory& traj, const Ball& ball, double t_low, double t_high) {
  const SpaceTimeGrid& g = traj.grid;
  if (!ball_inside(g, ball.center, ball.radius, 0.0)) throw InvalidRegion("ball leaves the grid square");
  const double tol = 1e-9 * g.tau();
  if (t_low > t_high || t_low < g.t_begin - tol || t_high > g.t_end + tol) {
    throw InvalidRegion("time window leaves the grid time window");
  }
  const Mesh m = traj.mesh();
  double best = 0.0;
  bool any = false;
  for (int k = 0; k <= g.steps; ++k) {
    const double t = g.time(k);
    if (t < t_low - tol || t > t_high + tol) continue;
    any = true;
    const ScalarField& f = traj.levels[static_cast<std::size_t>(k)];
    double sum = 0.0;
    for (int j = 0; j < m.side(); ++j) {
      for (int i = 0; i < m.side(); ++i) {
        if (in_ball(i * m.h, j * m.h, ball.center, ball.radius)) sum += f(i, j) * f(i, j);
      }
    }
    best = std::max(best, std::sqrt(sum) * m.h);
  }
  if (!any) throw InvalidRegion("time window contains no level");
  return best;
}

Difference finite_difference(const ScalarField& field, int direction, double shift) {
  if (direction != 0 && direction != 1) throw InvalidInput("direction must be 0 or 1");
  const Mesh& m = field.mesh();
  const int k = shift_in_cells(shift, m.h);
  Difference d{ScalarField(m), ScalarField(m),
               std::vector<char>(static_cast<std::size_t>(m.node_count()), 0), k};
  for (int j = 0; j < m.side(); ++j) {
    for (int i = 0; i < m.side(); ++i) {
      const int si = i + (direction == 0 ? k : 0);
      const int sj = j + (direction == 1 ? k : 0);
      if (si < 0 || sj < 0 || si > m.cells || sj > m.cells) continue;
      const double t = field(si, sj) - field(i, j);
      d.tau(i, j) = t;
      d.delta(i, j) = t / shift;
      d.valid[static_cast<std::size_t>(m.node(i, j))] = 1;
    }
  }
  return d;
}

double gagliardo_seminorm(const ScalarField& field, const SmoothnessOrder& order,
                          const std::optional<Ball>& region) {
  if (!(order.s > 0.0 && order.s < 1.0) || !(order.q >= 1.0) || std::isinf(order.q)) {
    throw InvalidInput("gagliardo_seminorm: need 0 < s < 1 and finite q >= 1");
  }
  const Mesh& m = field.mesh();
  std::vector<double> xs, ys, vs;
  for (int j = 0; j < m.side(); ++j) {
    for (int i = 0; i < m.side(); ++i) {
      if (region && !in_ball(i * m.h, j * m.h, region->center, region->radius)) continue;
      xs.push_back(i * m.h);
      ys.push_back(j * m.h);
      vs.push_back(field(i, j));
    }
  }
  const double q = order.q;
  const double half_exp = 0.5 * (2.0 + order.s * q);
  double sum = 0.0;
  for (std::size_t a = 0; a < vs.size(); ++a) {
    double row = 0.0;
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      const double dv = std::abs(vs[a] - vs[b]);
      if (dv == 0.0) continue;
      const double dx = xs[a] - xs[b], dy = ys[a] - ys[b];
      const double d2 = dx * dx + dy * dy;
      row += (q == 2.0 ? dv * dv : std::pow(dv, q)) / std::pow(d2, half_exp);
    }
    sum += row;
  }
  const double h2 = m.h * m.h;
  return std::pow(2.0 * sum * h2 * h2, 1.0 / q);
}

double besov_seminorm(const ScalarField& field, const SmoothnessOrder& order,
                      const std::optional<Ball>& region) {
  if (const auto bad = order.violations(); !bad.empty()) throw InvalidInput(bad.front());
  const ScalarField v = masked(field, region);
  const Mesh& m = v.mesh();
  if (order.cutoff < m.h * (1.0 - 1e-12)) throw InvalidRegion("besov cutoff below the grid spacing");

  const double decades = std::log10(order.cutoff / m.h);
  const int shells = std::max(2, static_cast<int>(std::ceil(order.shells_per_decade * decades)) + 1);
  const double dlog = shells > 1 ? std::log(order.cutoff / m.h) / (shells - 1) : 0.0;
  const int pad = static_cast<int>(std::ceil(order.cutoff / m.h)) + 1;
  const double p = order.p;
  const double dtheta = 2.0 * std::numbers::pi / order.angles;
  const bool sup_form = std::isinf(order.q);

  double acc = 0.0;
  for (int k = 0; k < shells; ++k) {
    const double rho = m.h * std::exp(k * dlog);
    const double shell_w = (k == 0 || k == shells - 1) ? 0.5 * dlog : dlog;
    for (int a = 0; a < order.angles; ++a) {
      const double hx = rho * std::cos(a * dtheta), hy = rho * std::sin(a * dtheta);
      double inner = 0.0;
      for (int j = -pad; j <= m.cells + pad; ++j) {
        for (int i = -pad; i <= m.cells + pad; ++i) {
          const double x = i * m.h, y = j * m.h;
          const double d = bilinear(v, x + hx, y + hy) - node_value_or_zero(v, i, j);
          if (d != 0.0) inner += (p == 2.0 ? d * d : std::pow(std::abs(d), p));
        }
      }
      inner *= m.h * m.h;
      if (sup_form) {
        acc = std::max(acc, std::pow(inner, 1.0 / p) / std::pow(rho, order.s));
      } else {
        acc += shell_w * dtheta * std::pow(inner, order.q / p) * std::pow(rho, -order.s * order.q);
      }
    }
  }
  return sup_form ? acc : std::pow(acc, 1.0 / order.q);
}

double parabolic_besov_norm(const Trajectory& f, const Cylinder& cyl, double s, double pprime) {
  if (!(pprime >= 1.0)) throw InvalidInput("parabolic_besov_norm: p' must be >= 1");
  const Mesh m = f.mesh();
  const Ball ball{cyl.center, cyl.radius};
  SmoothnessOrder order;
  order.s = s;
  order.p = pprime;
  order.q = 1.0;
  order.cutoff = cyl.radius / 4.0;
  double sum = 0.0;
  for (int k : cylinder_levels(f.grid, cyl)) {
    const ScalarField& level = f.levels[static_cast<std::size_t>(k)];
    double lp = 0.0;
    for (int j = 0; j < m.side(); ++j) {
      for (int i = 0; i < m.side(); ++i) {
        if (in_ball(i * m.h, j * m.h, ball.center, ball.radius)) lp += std::pow(std::abs(level(i, j)), pprime);
      }
    }
    lp = std::pow(lp * m.h * m.h, 1.0 / pprime);
    const double total = lp + besov_seminorm(level, order, ball);
    sum += std::pow(total, pprime);
  }
  return std::pow(sum * f.grid.tau(), 1.0 / pprime);
}

NikolskiiFit nikolskii_fit(const Trajectory& field, const Cylinder& cyl, double q,
                           const std::vector<double>& shifts) {
  if (!(q >= 1.0)) throw InvalidInput("nikolskii_fit: q must be >= 1");
  if (shifts.size() < 2) throw InsufficientData("nikolskii_fit needs at least 2 shifts");
  const Mesh m = field.mesh();
  const auto levels = cylinder_levels(field.grid, cyl);
  std::vector<double> sums;
  double field_integral = 0.0;
  for (int lv : levels) {
    const ScalarField& f = field.levels[static_cast<std::size_t>(lv)];
    for (int j = 0; j < m.side(); ++j) {
      for (int i = 0; i < m.side(); ++i) {
        if (in_ball(i * m.h, j * m.h, cyl.center, cyl.radius)) field_integral += std::pow(std::abs(f(i, j)), q);
      }
    }
  }
  field_integral *= m.h * m.h * field.grid.tau();
  for (double shift : shifts) {
    const int k = shift_in_cells(shift, m.h);
    double sum = 0.0;
    for (int lv : levels) {
      const ScalarField& f = field.levels[static_cast<std::size_t>(lv)];
      for (int j = 0; j < m.side(); ++j) {
        for (int i = 0; i < m.side(); ++i) {
          if (!in_ball(i * m.h, j * m.h, cyl.center, cyl.radius)) continue;
          if (i + k >= 0 && i + k <= m.cells) sum += std::pow(std::abs(f(i + k, j) - f(i, j)), q);
          if (j + k >= 0 && j + k <= m.cells) sum += std::pow(std::abs(f(i, j + k) - f(i, j)), q);
        }
      }
    }
    sums.push_back(sum * m.h * m.h * field.grid.tau());
  }
  std::vector<double> abs_shifts;
  for (double s : shifts) abs_shifts.push_back(std::abs(s));
  return fit_slope(abs_shifts, sums, q, field_integral);
}

NikolskiiFit nikolskii_fit(const VectorTrajectory& field, const Cylinder& cyl, double q,
                           const std::vector<double>& shifts) {
  if (!(q >= 1.0)) throw InvalidInput("nikolskii_fit: q must be >= 1");
  if (shifts.size() < 2) throw InsufficientData("nikolskii_fit needs at least 2 shifts");
  const auto levels = cylinder_levels(field.grid, cyl);
  const Mesh m = mesh_of(field.grid);
  std::vector<double> sums;
  double field_integral = 0.0;
  for (int lv : levels) {
    const VectorField& f = field.levels[static_cast<std::size_t>(lv)];
    for (int j = 0; j < m.cells; ++j) {
      for (int i = 0; i < m.cells; ++i) {
        for (int tri = 0; tri < 2; ++tri) {
          const Vec2 c = f.centroid(i, j, tri);
          if (in_ball(c.x(), c.y(), cyl.center, cyl.radius)) field_integral += std::pow(f.at(i, j, tri).norm(), q);
        }
      }
    }
  }
  field_integral *= 0.5 * m.h * m.h * field.grid.tau();
  for (double shift : shifts) {
    const int k = shift_in_cells(shift, m.h);
    double sum = 0.0;
    for (int lv : levels) {
      const VectorField& f = field.levels[static_cast<std::size_t>(lv)];
      for (int j = 0; j < m.cells; ++j) {
        for (int i = 0; i < m.cells; ++i) {
          for (int tri = 0; tri < 2; ++tri) {
            const Vec2 c = f.centroid(i, j, tri);
            if (!in_ball(c.x(), c.y(), cyl.center, cyl.radius)) continue;
            if (i + k >= 0 && i + k < m.cells) {
              sum += std::pow((f.at(i + k, j, tri) - f.at(i, j, tri)).norm(), q);
            }
            if (j + k >= 0 && j + k < m.cells) {
              sum += std::pow((f.at(i, j + k, tri) - f.at(i, j, tri)).norm(), q);
            }
          }
        }
      }
    }
    sums.push_back(sum * 0.5 * m.h * m.h * field.grid.tau());
  }
  std::vector<double> abs_shifts;
  for (double s : shifts) abs_shifts.push_back(std::abs(s));
  return fit_slope(abs_shifts, sums, q, field_integral);
}

double grad_l2_of_field(const VectorTrajectory& field, const Cylinder& cyl) {
  const SpaceTimeGrid& g = field.grid;
  const Mesh m = mesh_of(g);
  if (!ball_inside(g, cyl.center, cyl.radius, m.h)) {
    throw InvalidRegion("cylinder needs a one-cell margin inside the grid square");
  }
  const int n = m.cells;
  double sum = 0.0;
  for (int lv : cylinder_levels(g, cyl)) {
    const auto w = field.levels[static_cast<std::size_t>(lv)].cell_average();
    auto at = [&](int i, int j) -> const Vec2& { return w[static_cast<std::size_t>(j * n + i)]; };
    for (int j = 1; j < n - 1; ++j) {
      for (int i = 1; i < n - 1; ++i) {
        if (!in_ball((i + 0.5) * m.h, (j + 0.5) * m.h, cyl.center, cyl.radius)) continue;
        const Vec2 dx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * m.h);
        const Vec2 dy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * m.h);
        sum += dx.squaredNorm() + dy.squaredNorm();
      }
    }
  }
  return sum * m.h * m.h * g.tau();
}

VectorTrajectory v_trajectory(const Trajectory& traj, const DegenParams& params) {
  const GProfile profile(params);
  VectorTrajectory out = gradient_trajectory(traj);
  for (auto& level : out.levels) {
    for (int k = 0; k < level.sample_count(); ++k) level[k] = planar::v_map(level[k], profile);
  }
  return out;
}

double grad_l2_of_v(const Trajectory& traj, const DegenParams& params, const Cylinder& cyl) {
  return grad_l2_of_field(v_trajectory(traj, params), cyl);
}

}  // namespace degen
