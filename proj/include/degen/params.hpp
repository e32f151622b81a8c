#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace degen {

using AmbientVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Minimal admissible profile exponent for the degeneracy threshold `lambda`:
/// 0 when lambda == 0, (p+1)/(2(p-1)) for p > 2 and 3/2 for p == 2.
double default_alpha(double p, double lambda);

/// The quadruple (p, lambda, alpha, eps) shared by every nonlinear map and solver.
class DegenParams {
 public:
  /// Validates and stores the parameters; alpha defaults to default_alpha(p, lambda).
  DegenParams(double p, double lambda, double eps);
  DegenParams(double p, double lambda, double alpha, double eps);

  double p() const noexcept { return p_; }
  double lambda() const noexcept { return lambda_; }
  double alpha() const noexcept { return alpha_; }
  double eps() const noexcept { return eps_; }
  /// Conjugate exponent p/(p-1).
  double p_conj() const noexcept { return p_ / (p_ - 1.0); }

  DegenParams with_eps(double eps) const { return DegenParams(p_, lambda_, alpha_, eps); }

  /// Every constraint the quadruple violates, empty when valid.
  static std::vector<std::string> violations(double p, double lambda, double alpha,
                                             double eps);

 private:
  double p_;
  double lambda_;
  double alpha_;
  double eps_;
};

struct QuadratureConfig {
  double abs_tol = 1e-300;
  double rel_tol = 1e-14;
  int max_subdivisions = 500;
};

}  // namespace degen
