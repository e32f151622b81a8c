#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degen/grid.hpp"
#include "degen/params.hpp"

namespace degen {

/// Backward parabolic cylinder B_radius(center) x (vertex_time - radius^2, vertex_time].
struct Cylinder {
  Eigen::Vector2d center{0.5, 0.5};
  double vertex_time = 0.0;
  double radius = 0.1;

  double t_low() const { return vertex_time - radius * radius; }
  /// Same center and vertex, new radius.
  Cylinder scaled(double new_radius) const { return {center, vertex_time, new_radius}; }
  std::vector<std::string> violations(const SpaceTimeGrid& grid) const;
};

/// Spatial disc used as an integration region.
struct Ball {
  Eigen::Vector2d center{0.5, 0.5};
  double radius = 0.1;
};

struct SmoothnessOrder {
  double s = 0.5;       // fractional order in (0, 1)
  double p = 2.0;       // integrability of the inner integral
  double q = 2.0;       // outer exponent; +infinity selects the sup form
  double cutoff = 0.1;  // increments satisfy |h| <= cutoff
  int shells_per_decade = 8;
  int angles = 16;

  std::vector<std::string> violations() const;
};

/// Time levels k with t_k in (t_low, vertex_time]; throws InvalidRegion
/// when the cylinder leaves the grid box.
std::vector<int> cylinder_levels(const SpaceTimeGrid& grid, const Cylinder& cyl);

/// Midpoint-rule (int_Q |field|^p dz)^{1/p}: node (or triangle-centroid)
/// inclusion in the ball, weight tau per level.
double lp_norm_cylinder(const Trajectory& field, const Cylinder& cyl, double p);
double lp_norm_cylinder(const VectorTrajectory& field, const Cylinder& cyl, double p);

/// max over levels with t in [t_low, t_high] of the L2 norm over the ball.
double sup_l2_in_time(const Trajectory& traj, const Ball& ball, double t_low, double t_high);

/// tau = F(x + h e_j) - F(x), delta = tau / h. Both vanish at nodes whose
/// shifted point leaves the grid; `valid` marks the nodes where they are defined.
struct Difference {
  ScalarField tau;
  ScalarField delta;
  std::vector<char> valid;
  int shift_cells = 0;
};

Difference finite_difference(const ScalarField& field, int direction, double shift);

/// (sum_{x != y} |v(x)-v(y)|^q / |x-y|^{2+sq} h^4)^{1/q} over grid nodes, or
/// over the nodes inside `region` when given.
double gagliardo_seminorm(const ScalarField& field, const SmoothnessOrder& order,
                          const std::optional<Ball>& region = std::nullopt);

/// Difference-characterization seminorm with the field extended by zero
/// outside its square (and outside `region` when given). The increment
/// integral runs over log-spaced shells from the grid spacing to the cutoff
/// and uniform angles; off-grid shifts use bilinear interpolation.
///
/// q finite: (int (int |d_h v|^p dx)^{q/p} |h|^{-sq} dh/|h|^2)^{1/q};
/// q infinite: max over shells of (int |d_h v|^p dx)^{1/p} |h|^{-s}.
double besov_seminorm(const ScalarField& field, const SmoothnessOrder& order,
                      const std::optional<Ball>& region = std::nullopt);

/// (sum_levels (||f||_{L^{p'}(ball)} + |f 1_ball|_{B^s_{p',1}})^{p'} tau)^{1/p'},
/// cutoff radius/4.
double parabolic_besov_norm(const Trajectory& f, const Cylinder& cyl, double s, double pprime);

struct NikolskiiFit {
  double theta = 0.0;      // clipped to [0, 1]
  double raw_slope = 0.0;  // unclipped least-squares slope / q
  bool degenerate = false; // every increment integral vanished
  std::vector<double> shifts;
  std::vector<double> integrals;
};

/// Least-squares slope of log sum_j int_Q |tau_{j,h} F|^q dz against q log h.
/// Shifts are lengths, multiples of the grid spacing. Increment integrals
/// below 1e-12^q int_Q |F|^q count as zero; all zero gives theta = 1 with
/// `degenerate` set.
NikolskiiFit nikolskii_fit(const Trajectory& field, const Cylinder& cyl, double q,
                           const std::vector<double>& shifts);
NikolskiiFit nikolskii_fit(const VectorTrajectory& field, const Cylinder& cyl, double q,
                           const std::vector<double>& shifts);

/// int_Q |D_x W|^2 dz for a triangle-sampled field W: cell averages, central
/// differences across cells, cells whose centers lie in the ball.
double grad_l2_of_field(const VectorTrajectory& field, const Cylinder& cyl);

/// grad_l2_of_field of V_{alpha,lambda}(grad u).
double grad_l2_of_v(const Trajectory& traj, const DegenParams& params, const Cylinder& cyl);

/// V_{alpha,lambda} applied to every triangle gradient.
VectorTrajectory v_trajectory(const Trajectory& traj, const DegenParams& params);

}  // namespace degen
