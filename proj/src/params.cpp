#include "degen/params.hpp"

#include <cmath>
#include <sstream>

#include "degen/errors.hpp"

namespace degen {

double default_alpha(double p, double lambda) {
  if (!(p >= 2.0) || !std::isfinite(p)) {
    throw InvalidInput("default_alpha: p must be >= 2");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("default_alpha: lambda must be >= 0");
  }
  if (lambda == 0.0) return 0.0;
  if (p == 2.0) return 1.5;
  return (p + 1.0) / (2.0 * (p - 1.0));
}

std::vector<std::string> DegenParams::violations(double p, double lambda, double alpha,
                                                 double eps) {
  std::vector<std::string> out;
  if (!std::isfinite(p) || p < 2.0) out.emplace_back("p must satisfy p >= 2");
  if (!std::isfinite(lambda) || lambda < 0.0) out.emplace_back("lambda must satisfy lambda >= 0");
  if (!std::isfinite(eps) || eps < 0.0 || eps > 1.0) out.emplace_back("eps must lie in [0, 1]");
  if (!std::isfinite(alpha) || alpha < 0.0) {
    out.emplace_back("alpha must satisfy alpha >= 0");
  } else if (std::isfinite(lambda) && std::isfinite(p) && p >= 2.0) {
    if (lambda == 0.0 && alpha != 0.0) {
      out.emplace_back("alpha must be 0 when lambda = 0");
    } else if (lambda > 0.0) {
      const double floor = default_alpha(p, lambda);
      if (alpha < floor) {
        std::ostringstream msg;
        msg << "alpha = " << alpha << " is below the admissible floor " << floor
            << " for p = " << p << " and lambda > 0";
        out.push_back(msg.str());
      }
    }
  }
  return out;
}

DegenParams::DegenParams(double p, double lambda, double eps)
    : DegenParams(p, lambda,
                  (std::isfinite(p) && p >= 2.0 && std::isfinite(lambda) && lambda >= 0.0)
                      ? default_alpha(p, lambda)
                      : 0.0,
                  eps) {}

DegenParams::DegenParams(double p, double lambda, double alpha, double eps)
    : p_(p), lambda_(lambda), alpha_(alpha), eps_(eps) {
  const auto bad = violations(p, lambda, alpha, eps);
  if (!bad.empty()) {
    std::string msg = "invalid DegenParams:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw InvalidInput(msg);
  }
}

}  // namespace degen
