#include "degen/core_maps.hpp"

#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "degen/errors.hpp"

namespace degen {

namespace {

void require_finite(const AmbientVector& xi, const char* who) {
  if (!xi.allFinite()) {
    throw InvalidInput(std::string(who) + ": non-finite input component");
  }
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Globally adaptive Gauss-Kronrod (G10/K21 panels): the panel with the
// largest error estimate is bisected until the summed estimate meets the
// tolerance or the subdivision budget runs out.
template <class F>
double adaptive_gk(F&& f, double lo, double hi, const QuadratureConfig& quad,
                   const char* who) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
  };
  // Boost reports the single-panel error on the reference interval [-1, 1];
  // rescale it. Estimates below the rounding floor of a panel are clipped.
  auto make_panel = [&f](double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = Rule::integrate(f, a, b, 0, 0.0, &err, &l1);
    err *= 0.5 * (b - a);
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * l1;
    return Panel{a, b, v, err > floor ? err : 0.0};
  };
  std::priority_queue<Panel> panels;
  panels.push(make_panel(lo, hi));
  double total = panels.top().value;
  double total_error = panels.top().error;
  for (int split = 0;; ++split) {
    if (!std::isfinite(total)) break;
    if (total_error <= std::max(quad.abs_tol, quad.rel_tol * std::abs(total))) return total;
    if (split >= quad.max_subdivisions) break;
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = make_panel(worst.lo, mid);
    const Panel right = make_panel(mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  throw QuadratureFailure(std::string(who) + ": no convergence within " +
                          std::to_string(quad.max_subdivisions) +
                          " subdivisions (error estimate " + std::to_string(total_error) + ")");
}

}  // namespace

AmbientVector h_gamma(const AmbientVector& xi, double gamma, double lambda) {
  require_finite(xi, "h_gamma");
  if (!(gamma > 0.0) || !(lambda >= 0.0)) {
    throw InvalidInput("h_gamma: requires gamma > 0 and lambda >= 0");
  }
  const double r = xi.norm();
  if (r <= lambda || r == 0.0) return AmbientVector::Zero(xi.size());
  return std::pow(r - lambda, gamma) / r * xi;
}

// ---------------------------------------------------------------------------
// G profile

GProfile::GProfile(const DegenParams& params, const QuadratureConfig& quad)
    : GProfile(params.p(), params.lambda(), params.alpha(), quad) {}

GProfile::GProfile(double p, double lambda, double alpha, const QuadratureConfig& quad)
    : p_(p), lambda_(lambda), alpha_(alpha), quad_(quad) {
  if (!(p >= 2.0) || !(lambda >= 0.0) || !(alpha >= 0.0) || !std::isfinite(p) ||
      !std::isfinite(lambda) || !std::isfinite(alpha)) {
    throw InvalidInput("GProfile: requires p >= 2, lambda >= 0, alpha >= 0");
  }
  a_ = 0.5 * (p - 1.0 + 2.0 * alpha);
  b_ = 0.5 * (1.0 + 2.0 * alpha);
  if (lambda_ > 0.0) {
    i_half_ = small_series(0.5);
    i_two_ = i_half_ + middle_panel(0.5, 2.0);
  }
}

double GProfile::operator()(double t) const {
  if (!(t >= 0.0)) throw InvalidInput("g_profile: t must be >= 0");
  if (t == 0.0) return 0.0;
  if (lambda_ == 0.0) return 2.0 / p_ * std::pow(t, 0.5 * p_);
  return std::pow(lambda_, 0.5 * p_) * scaled_integral(t / lambda_);
}

double GProfile::scaled_integral(double x) const {
  if (x <= 0.5) return small_series(x);
  if (x <= 2.0) return i_half_ + middle_panel(0.5, x);
  return large_series(x);
}

// int_0^x s^A (1+s)^{-B} ds = x^{A+1} sum_k binom(-B, k) x^k / (A+k+1), x <= 1/2.
double GProfile::small_series(double x) const {
  double coeff = 1.0;
  double xk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double term = coeff * xk / (a_ + k + 1.0);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    coeff *= -(b_ + k) / (k + 1.0);
    xk *= x;
  }
  return std::pow(x, a_ + 1.0) * sum;
}

// For s >= 2 the integrand is s^{p/2-1} (1+1/s)^{-B}; integrate the series
// in 1/s term by term from 2 to x and add the anchor I(2).
double GProfile::large_series(double x) const {
  const double log_ratio = std::log(x / 2.0);
  double coeff = 1.0;
  double e = 0.5 * p_;
  double x_pow = std::pow(x, e);
  double two_pow = std::pow(2.0, e);
  double sum = 0.0;
  for (int k = 0; k < 400; ++k) {
    double piece;
    if (std::abs(e) < 1e-13) {
      piece = log_ratio;
    } else if (std::abs(e * log_ratio) < 0.5) {
      piece = two_pow * std::expm1(e * log_ratio) / e;
    } else {
      piece = (x_pow - two_pow) / e;
    }
    const double term = coeff * piece;
    sum += term;
    if (k > p_ && std::abs(coeff * two_pow / e) <= 1e-17 * (i_two_ + std::abs(sum))) break;
    coeff *= -(b_ + k) / (k + 1.0);
    e -= 1.0;
    x_pow /= x;
    two_pow *= 0.5;
  }
  return i_two_ + sum;
}

double GProfile::middle_panel(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  const double a = a_;
  const double b = b_;
  auto integrand = [a, b](double s) { return std::exp(a * std::log(s) - b * std::log1p(s)); };
  return adaptive_gk(integrand, lo, hi, quad_, "g_profile");
}

double g_profile(double t, const DegenParams& params, const QuadratureConfig& quad) {
  if (!(t >= 0.0)) throw InvalidInput("g_profile: t must be >= 0");
  return GProfile(params, quad)(t);
}

double g_profile_quadrature(double t, double p, double lambda, double alpha,
                            const QuadratureConfig& quad) {
  if (!(t >= 0.0)) throw InvalidInput("g_profile_quadrature: t must be >= 0");
  if (!(p >= 2.0) || !(lambda >= 0.0) || !(alpha >= 0.0)) {
    throw InvalidInput("g_profile_quadrature: requires p >= 2, lambda >= 0, alpha >= 0");
  }
  if (t == 0.0) return 0.0;
  const double a = 0.5 * (p - 1.0 + 2.0 * alpha);
  const double b = 0.5 * (1.0 + 2.0 * alpha);
  auto integrand = [a, b, lambda](double w) {
    if (w <= 0.0) return 0.0;
    return std::pow(w, a) / std::pow(w + lambda, b);
  };
  // Leading power of the integrand at w = 0.
  const double lead = lambda > 0.0 ? a : a - b;
  if (lead < 1.0) {
    auto substituted = [&integrand](double s) { return 2.0 * s * integrand(s * s); };
    return adaptive_gk(substituted, 0.0, std::sqrt(t), quad, "g_profile_quadrature");
  }
  return adaptive_gk(integrand, 0.0, t, quad, "g_profile_quadrature");
}

double g_profile_closed_p2_alpha32(double t, double lambda) {
  if (!(t >= 0.0) || !(lambda > 0.0)) {
    throw InvalidInput("g_profile_closed_p2_alpha32: requires t >= 0 and lambda > 0");
  }
  return t + lambda - lambda * lambda / (t + lambda) - 2.0 * lambda * std::log1p(t / lambda);
}

// ---------------------------------------------------------------------------
// Vector maps

AmbientVector v_map(const AmbientVector& xi, const GProfile& profile) {
  require_finite(xi, "v_map");
  const double r = xi.norm();
  if (r <= profile.lambda() || r == 0.0) return AmbientVector::Zero(xi.size());
  return profile(r - profile.lambda()) / r * xi;
}

AmbientVector v_map(const AmbientVector& xi, const DegenParams& params,
                    const QuadratureConfig& quad) {
  return v_map(xi, GProfile(params, quad));
}

double energy_density(const AmbientVector& xi, const DegenParams& params) {
  require_finite(xi, "energy_density");
  const double p = params.p();
  const double r = xi.norm();
  return std::pow(positive_part(r - params.lambda()), p) / p +
         params.eps() / p * std::pow(1.0 + r * r, 0.5 * p);
}

AmbientVector flux(const AmbientVector& xi, const DegenParams& params) {
  require_finite(xi, "flux");
  const double p = params.p();
  const double r = xi.norm();
  double coeff = params.eps() * std::pow(1.0 + r * r, 0.5 * (p - 2.0));
  if (r > params.lambda() && r > 0.0) coeff += std::pow(r - params.lambda(), p - 1.0) / r;
  return coeff * xi;
}

Matrix flux_jacobian(const AmbientVector& xi, const DegenParams& params) {
  require_finite(xi, "flux_jacobian");
  const auto n = xi.size();
  const double p = params.p();
  const double eps = params.eps();
  const double r = xi.norm();
  const double r2 = r * r;
  Matrix jac = Matrix::Zero(n, n);
  if (eps > 0.0) {
    jac.diagonal().array() += eps * std::pow(1.0 + r2, 0.5 * (p - 2.0));
    jac += eps * (p - 2.0) * std::pow(1.0 + r2, 0.5 * (p - 4.0)) * (xi * xi.transpose());
  }
  if (r > params.lambda() && r > 0.0) {
    const double excess = r - params.lambda();
    const double tangential = std::pow(excess, p - 1.0) / r;
    const double radial = (p - 1.0) * std::pow(excess, p - 2.0);
    const AmbientVector e = xi / r;
    const Matrix ee = e * e.transpose();
    jac += radial * ee + tangential * (Matrix::Identity(n, n) - ee);
  }
  return jac;
}

std::pair<double, double> ellipticity_bounds(const AmbientVector& xi,
                                             const DegenParams& params) {
  const double p = params.p();
  const double r = xi.norm();
  if (r == 0.0) throw InvalidInput("ellipticity_bounds: xi must be nonzero");
  const double reg = params.eps() * std::pow(1.0 + r * r, 0.5 * (p - 2.0));
  const double excess = positive_part(r - params.lambda());
  const double lower = reg + std::pow(excess, p - 1.0) / r;
  const double upper_deg = excess > 0.0 ? std::pow(excess, p - 2.0) : 0.0;
  return {lower, (p - 1.0) * (reg + upper_deg)};
}

PhiValue phi_weight(double t, const DegenParams& params) {
  if (!(t >= 0.0)) throw InvalidInput("phi_weight: t must be >= 0");
  const double lambda = params.lambda();
  if (lambda == 0.0) return {t > 0.0 ? 1.0 : 0.0, 0.0};
  if (t == 0.0) return {0.0, 0.0};
  const double alpha = params.alpha();
  const double denom = t * t + lambda * lambda;
  const double value = std::pow(t * t / denom, alpha);
  const double derivative = 2.0 * alpha * lambda * lambda / denom * value / t;
  return {value, derivative};
}

// ---------------------------------------------------------------------------

namespace planar {

Vec2 flux(const Vec2& xi, const DegenParams& params) {
  const double p = params.p();
  const double r = xi.norm();
  double coeff = params.eps() * std::pow(1.0 + r * r, 0.5 * (p - 2.0));
  if (r > params.lambda() && r > 0.0) coeff += std::pow(r - params.lambda(), p - 1.0) / r;
  return coeff * xi;
}

Mat2 flux_jacobian(const Vec2& xi, const DegenParams& params) {
  const double p = params.p();
  const double eps = params.eps();
  const double r = xi.norm();
  const double r2 = r * r;
  Mat2 jac = Mat2::Zero();
  if (eps > 0.0) {
    const double base = std::pow(1.0 + r2, 0.5 * (p - 4.0));
    jac.diagonal().array() += eps * base * (1.0 + r2);
    jac += eps * (p - 2.0) * base * (xi * xi.transpose());
  }
  if (r > params.lambda() && r > 0.0) {
    const double excess = r - params.lambda();
    const double pw = std::pow(excess, p - 2.0);
    const double tangential = pw * excess / r;
    const double radial = (p - 1.0) * pw;
    const Vec2 e = xi / r;
    const Mat2 ee = e * e.transpose();
    jac += radial * ee + tangential * (Mat2::Identity() - ee);
  }
  return jac;
}

double energy_density(const Vec2& xi, const DegenParams& params) {
  const double p = params.p();
  const double r = xi.norm();
  return std::pow(positive_part(r - params.lambda()), p) / p +
         params.eps() / p * std::pow(1.0 + r * r, 0.5 * p);
}

Vec2 v_map(const Vec2& xi, const GProfile& profile) {
  const double r = xi.norm();
  if (r <= profile.lambda() || r == 0.0) return Vec2::Zero();
  return profile(r - profile.lambda()) / r * xi;
}

}  // namespace planar

}  // namespace degen
