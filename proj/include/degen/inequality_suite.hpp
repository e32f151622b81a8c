#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "degen/core_maps.hpp"
#include "degen/params.hpp"

namespace degen {

/// One side-by-side comparison `small <= large`.
///
/// `margin()` is large - small, so non-negative means the inequality holds.
/// The comparison passes when the margin is at least -slack * (|small| + |large|).
struct Margin {
  double small = 0.0;
  double large = 0.0;

  double margin() const { return large - small; }
  double scale() const { return std::abs(small) + std::abs(large); }
  /// Margin divided by the scale of both sides; 0 when both sides vanish.
  double relative() const {
    const double s = scale();
    return s > 0.0 ? margin() / s : 0.0;
  }
  bool holds(double slack) const { return margin() >= -slack * scale(); }
};

/// Quantities of the pair inequalities. An empty optional means the
/// inequality's precondition fails for this pair (not a violation).
struct PairMargins {
  std::optional<Margin> unit_vector;       // |xi/|xi| - eta/|eta|| <= 2|xi-eta|/|eta|
  std::optional<Margin> monotonicity_4p2;  // (4/p^2)|H_{p/2} diff|^2 <= <H_{p-1} diff, xi-eta>
  std::optional<Margin> monotonicity_2p1;  // 2^{-p-1}(|eta|-l)^p |xi-eta|^2/(|eta|(|xi|+|eta|)) <= ...
  std::optional<Margin> v_vs_h;            // |V(xi)-V(eta)|^2 <= C_p <H_{p-1} diff, xi-eta>
  std::optional<double> lind_ratio;        // |xi-eta|^p / ||xi|^{(p-2)/2}xi - |eta|^{(p-2)/2}eta|^2
};

struct ScalarMargins {
  Margin g_bound;     // G(t) <= (2/p) t^{p/2} (t/(t+lambda))^{(1+2a)/2}
  Margin phi_growth;  // t Phi'(t) <= 2 alpha Phi(t)
};

/// The constant 2 + 2^{p+7}/p^2 relating V differences to the monotonicity
/// of H_{p-1}.
double v_vs_h_constant(double p);

PairMargins check_pair(const AmbientVector& xi, const AmbientVector& eta,
                       const DegenParams& params, const QuadratureConfig& quad = {});
PairMargins check_pair(const AmbientVector& xi, const AmbientVector& eta,
                       const DegenParams& params, const GProfile& profile);

ScalarMargins check_scalar(double t, const DegenParams& params,
                           const QuadratureConfig& quad = {});
ScalarMargins check_scalar(double t, const DegenParams& params, const GProfile& profile);

struct SampleConfig {
  std::int64_t num_samples = 1000;  // per (p, lambda) combination
  std::vector<double> p_values{2.0, 2.5, 3.0, 4.0};
  std::vector<double> lambda_values{0.0, 0.5, 1.0, 2.0};
  std::pair<double, double> magnitude_range{1e-6, 1e6};
  std::uint64_t seed = 20240601;
  double slack = 1e-9;
  unsigned threads = 1;

  std::vector<std::string> violations() const;
};

/// Worst case of one inequality over a campaign.
struct InequalityStats {
  std::int64_t evaluated = 0;
  std::int64_t violations = 0;
  double worst_relative = 0.0;  // smallest relative margin seen
  bool has_worst = false;
  // arg-min sample
  double p = 0.0;
  double lambda = 0.0;
  std::vector<double> xi;
  std::vector<double> eta;
  double t = 0.0;
  std::int64_t sample_index = -1;

  void merge(const InequalityStats& other);
};

struct CampaignReport {
  std::map<std::string, InequalityStats> inequalities;
  /// Empirical sup of lind_ratio per p (p > 2, lambda = 0 only).
  std::map<double, double> lind_sup;
  /// Largest |b(xi,eta) - b(eta,xi)| relative to the scale of b.
  double symmetry_max_deviation = 0.0;
  /// Largest relative deviation of b(s xi, s eta) from s^p b(xi, eta), lambda = 0.
  double scale_covariance_max_deviation = 0.0;
  std::int64_t total_samples = 0;

  std::int64_t total_violations() const;
  bool passed() const { return total_violations() == 0; }
  void merge(const CampaignReport& other);
};

/// Deterministic in `config.seed`; independent of `config.threads`.
CampaignReport run_campaign(const SampleConfig& config);

void write_campaign_csv(std::ostream& out, const CampaignReport& report);
void write_campaign_summary(std::ostream& out, const CampaignReport& report);

/// Names of the inequalities, in report order.
const std::vector<std::string>& inequality_names();

}  // namespace degen
