#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "degen/grid.hpp"
#include "degen/params.hpp"

namespace degen {

using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

/// Regularized Cauchy-Dirichlet problem on the grid's space-time box.
///
/// `reference` supplies the initial slice and the lateral data at every step.
/// The source is `sampled_source` when present, else `source` (empty means 0).
struct ProblemSpec {
  std::string name;
  SpaceTimeGrid grid;
  DegenParams params{2.0, 0.0, 1e-8};
  SpaceTimeFunction reference;
  SpaceTimeFunction source;
  std::optional<Trajectory> sampled_source;
  /// The reference solves the unregularized problem with the unmollified source.
  bool exact = false;
  /// Replace f by its space-time mollification at scale params.eps().
  bool mollify = true;
};

/// Catalog: heat_sine, linear_drift, cone, mms_smooth.
ProblemSpec manufactured_problem(const std::string& name, const SpaceTimeGrid& grid,
                                 const DegenParams& params);
const std::vector<std::string>& catalog_names();

/// Pointwise source of mms_smooth: d_t u - div H_{p-1}(Du) for
/// u = (1+t) sin(pi x) sin(pi y), from hand-differentiated formulas.
double mms_smooth_source(double x, double y, double t, double p, double lambda);

/// Space-time convolution with the tensor bump phi_1(y) phi_2(s) of radius
/// eps in space and in time, each factor normalized to unit mass on the grid.
/// Values outside the sampled box count as zero.
Trajectory mollify_source(const Trajectory& f, double eps);

/// Source values at levels 0..M as the solver uses them: sampled or analytic
/// f, mollified when spec.mollify. Analytic sources are sampled on a
/// time-padded window before mollifying, so only the spatial boundary sees
/// the zero extension.
std::vector<ScalarField> source_levels(const ProblemSpec& spec);

/// The reference function sampled at every level of the grid.
Trajectory sample_reference(const ProblemSpec& spec);

}  // namespace degen
