#pragma once

#include <utility>

#include "degen/params.hpp"

namespace degen {

/// (|xi| - lambda)_+^gamma * xi/|xi|, and 0 at xi = 0.
AmbientVector h_gamma(const AmbientVector& xi, double gamma, double lambda);

/// The profile G(t) = int_0^t w^{(p-1+2a)/2} / (w+lambda)^{(1+2a)/2} dw.
///
/// Construction precomputes the two anchor values of the scaled integral
/// I(x) = int_0^x s^A (1+s)^{-B} ds (x = t/lambda) so that each evaluation
/// costs a truncated series: the binomial expansion of (1+s)^{-B} for
/// x <= 1/2, an expansion in 1/s for x >= 2, and a Gauss-Kronrod panel on
/// the bounded middle range. lambda = 0 uses the closed form (2/p) t^{p/2}.
class GProfile {
 public:
  explicit GProfile(const DegenParams& params, const QuadratureConfig& quad = {});
  /// Raw constructor; only requires p >= 2, lambda >= 0, alpha >= 0.
  GProfile(double p, double lambda, double alpha, const QuadratureConfig& quad = {});

  double operator()(double t) const;

  double p() const noexcept { return p_; }
  double lambda() const noexcept { return lambda_; }
  double alpha() const noexcept { return alpha_; }

 private:
  double scaled_integral(double x) const;
  double small_series(double x) const;
  double large_series(double x) const;
  double middle_panel(double lo, double hi) const;

  double p_;
  double lambda_;
  double alpha_;
  QuadratureConfig quad_;
  double a_ = 0.0;  // exponent of w in the numerator
  double b_ = 0.0;  // exponent of (w + lambda) in the denominator
  double i_half_ = 0.0;
  double i_two_ = 0.0;
};

double g_profile(double t, const DegenParams& params, const QuadratureConfig& quad = {});

/// Reference evaluation of G by adaptive Gauss-Kronrod on [0, t] directly.
/// Used to cross-check the closed forms and the series evaluator.
double g_profile_quadrature(double t, double p, double lambda, double alpha,
                            const QuadratureConfig& quad = {});

/// Antiderivative of w^2/(w+lambda)^2 from 0 to t (p = 2, alpha = 3/2):
/// t + lambda - lambda^2/(t+lambda) - 2 lambda ln(1 + t/lambda).
double g_profile_closed_p2_alpha32(double t, double lambda);

AmbientVector v_map(const AmbientVector& xi, const GProfile& profile);
AmbientVector v_map(const AmbientVector& xi, const DegenParams& params,
                    const QuadratureConfig& quad = {});

/// Regularized energy A_eps(xi) = (|xi|-lambda)_+^p / p + eps/p (1+|xi|^2)^{p/2}.
double energy_density(const AmbientVector& xi, const DegenParams& params);

/// Gradient of energy_density: H_{p-1}(xi) + eps (1+|xi|^2)^{(p-2)/2} xi.
AmbientVector flux(const AmbientVector& xi, const DegenParams& params);

/// Hessian of energy_density. Zero matrix where it vanishes identically
/// (eps = 0 and |xi| <= lambda, including the sphere |xi| = lambda).
Matrix flux_jacobian(const AmbientVector& xi, const DegenParams& params);

/// Lower and upper ellipticity coefficients of the Hessian at xi != 0:
/// eps(1+|xi|^2)^{(p-2)/2} + (|xi|-lambda)_+^{p-1}/|xi| and
/// (p-1)[eps(1+|xi|^2)^{(p-2)/2} + (|xi|-lambda)_+^{p-2}].
std::pair<double, double> ellipticity_bounds(const AmbientVector& xi,
                                             const DegenParams& params);

struct PhiValue {
  double value;
  double derivative;
};

/// Phi(t) = t^{2a}/(t^2+lambda^2)^a together with Phi'(t).
PhiValue phi_weight(double t, const DegenParams& params);

// Fixed-size helpers used by the grid solver; same formulas as above.
namespace planar {
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
Vec2 flux(const Vec2& xi, const DegenParams& params);
Mat2 flux_jacobian(const Vec2& xi, const DegenParams& params);
double energy_density(const Vec2& xi, const DegenParams& params);
Vec2 v_map(const Vec2& xi, const GProfile& profile);
}  // namespace planar

}  // namespace degen
