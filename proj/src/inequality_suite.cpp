#include "degen/inequality_suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <thread>

#include "degen/errors.hpp"

namespace degen {

namespace {

using Vec2 = Eigen::Vector2d;

constexpr std::int64_t kShardSize = 4096;

template <class Vec>
Vec h_map(const Vec& xi, double gamma, double lambda) {
  const double r = xi.norm();
  if (r <= lambda || r == 0.0) return Vec::Zero(xi.size());
  return std::pow(r - lambda, gamma) / r * xi;
}

template <class Vec>
Vec v_of(const Vec& xi, const GProfile& profile) {
  const double r = xi.norm();
  if (r <= profile.lambda() || r == 0.0) return Vec::Zero(xi.size());
  return profile(r - profile.lambda()) / r * xi;
}

template <class Vec>
PairMargins pair_margins(const Vec& xi, const Vec& eta, const DegenParams& params,
                         const GProfile& profile) {
  const double p = params.p();
  const double lambda = params.lambda();
  const double nxi = xi.norm();
  const double neta = eta.norm();
  const Vec diff = xi - eta;
  const double ndiff = diff.norm();
  PairMargins out;

  if (nxi > 0.0 && neta > 0.0) {
    out.unit_vector = Margin{(xi / nxi - eta / neta).norm(), 2.0 / neta * ndiff};
  }

  const double mono = (h_map(xi, p - 1.0, lambda) - h_map(eta, p - 1.0, lambda)).dot(diff);
  const double half_diff = (h_map(xi, 0.5 * p, lambda) - h_map(eta, 0.5 * p, lambda)).squaredNorm();
  out.monotonicity_4p2 = Margin{4.0 / (p * p) * half_diff, mono};

  if (neta > lambda) {
    const double rhs = std::pow(neta - lambda, p) / (neta * (nxi + neta)) * ndiff * ndiff /
                       std::pow(2.0, p + 1.0);
    out.monotonicity_2p1 = Margin{rhs, mono};
  }

  const double vdiff = (v_of(xi, profile) - v_of(eta, profile)).squaredNorm();
  out.v_vs_h = Margin{vdiff, v_vs_h_constant(p) * mono};

  if (p > 2.0 && lambda == 0.0 && ndiff > 0.0) {
    const double denom = (h_map(xi, 0.5 * p, 0.0) - h_map(eta, 0.5 * p, 0.0)).squaredNorm();
    if (denom > 0.0) out.lind_ratio = std::pow(ndiff, p) / denom;
  }
  return out;
}

// splitmix64 step, used to derive independent per-shard seeds.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Sampler {
 public:
  Sampler(std::uint64_t seed, double log_min, double log_max)
      : engine_(seed), log_min_(log_min), log_max_(log_max) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double magnitude() { return std::exp(log_min_ + uniform() * (log_max_ - log_min_)); }
  Vec2 direction() {
    const double theta = 2.0 * M_PI * uniform();
    return {std::cos(theta), std::sin(theta)};
  }
  Vec2 vector() { return magnitude() * direction(); }
  /// A vector whose length lies within 1e-6 (relative) of `radius`.
  Vec2 near_sphere(double radius) {
    if (radius == 0.0) return std::exp(log_min_) * uniform() * direction();
    return radius * (1.0 + (2.0 * uniform() - 1.0) * 1e-6) * direction();
  }

 private:
  std::mt19937_64 engine_;
  double log_min_;
  double log_max_;
};

void record(InequalityStats& stats, const Margin& m, double slack, double p, double lambda,
            const Vec2& xi, const Vec2& eta, double t, std::int64_t index) {
  ++stats.evaluated;
  if (!m.holds(slack)) ++stats.violations;
  const double rel = m.relative();
  if (!stats.has_worst || rel < stats.worst_relative ||
      (rel == stats.worst_relative && index < stats.sample_index)) {
    stats.has_worst = true;
    stats.worst_relative = rel;
    stats.p = p;
    stats.lambda = lambda;
    stats.xi = {xi[0], xi[1]};
    stats.eta = {eta[0], eta[1]};
    stats.t = t;
    stats.sample_index = index;
  }
}

void run_shard(const SampleConfig& config, std::size_t combo, std::int64_t shard,
               CampaignReport& report) {
  const std::size_t n_lambda = config.lambda_values.size();
  const double p = config.p_values[combo / n_lambda];
  const double lambda = config.lambda_values[combo % n_lambda];
  const DegenParams params(p, lambda, 0.0);
  const GProfile profile(params);

  std::uint64_t seed = mix(config.seed);
  seed = mix(seed ^ static_cast<std::uint64_t>(combo));
  seed = mix(seed ^ static_cast<std::uint64_t>(shard));
  Sampler rng(seed, std::log(config.magnitude_range.first),
              std::log(config.magnitude_range.second));

  const std::int64_t begin = shard * kShardSize;
  const std::int64_t end = std::min(config.num_samples, begin + kShardSize);
  auto& ineq = report.inequalities;
  for (std::int64_t i = begin; i < end; ++i) {
    const std::int64_t global = static_cast<std::int64_t>(combo) * config.num_samples + i;
    Vec2 xi;
    Vec2 eta;
    switch (i % 8) {
      case 4:
        xi = rng.near_sphere(lambda);
        eta = rng.vector();
        break;
      case 5:
        xi = rng.vector();
        eta = rng.near_sphere(lambda);
        break;
      case 6:
        if ((i / 8) % 2 == 0) {
          xi = rng.vector();
          eta = rng.vector();
          ((i / 16) % 2 == 0 ? xi : eta).setZero();
        } else {
          xi = rng.near_sphere(lambda);
          eta = rng.near_sphere(lambda);
        }
        break;
      case 7: {
        xi = rng.vector();
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        eta = sign * rng.magnitude() / xi.norm() * xi;
        break;
      }
      default:
        xi = rng.vector();
        eta = rng.vector();
    }

    const PairMargins m = pair_margins(xi, eta, params, profile);
    if (m.unit_vector) record(ineq["unit_vector"], *m.unit_vector, config.slack, p, lambda, xi, eta, 0.0, global);
    record(ineq["monotonicity_4p2"], *m.monotonicity_4p2, config.slack, p, lambda, xi, eta, 0.0, global);
    if (m.monotonicity_2p1) record(ineq["monotonicity_2p1"], *m.monotonicity_2p1, config.slack, p, lambda, xi, eta, 0.0, global);
    record(ineq["v_vs_h"], *m.v_vs_h, config.slack, p, lambda, xi, eta, 0.0, global);
    if (m.lind_ratio) {
      double& sup = report.lind_sup[p];
      sup = std::max(sup, *m.lind_ratio);
    }

    const PairMargins swapped = pair_margins(eta, xi, params, profile);
    const Margin& fwd = *m.monotonicity_4p2;
    const Margin& bwd = *swapped.monotonicity_4p2;
    if (fwd.scale() > 0.0) {
      report.symmetry_max_deviation = std::max(
          report.symmetry_max_deviation, std::abs(fwd.margin() - bwd.margin()) / fwd.scale());
    }

    if (lambda == 0.0 && i % 8 == 0) {
      const double s = std::exp(std::log(1e-2) + rng.uniform() * std::log(1e4));
      const PairMargins scaled = pair_margins<Vec2>(s * xi, s * eta, params, profile);
      const double sp = std::pow(s, p);
      const Margin& sm = *scaled.monotonicity_4p2;
      const double ref_scale = sp * fwd.scale();
      if (ref_scale > 0.0) {
        const double dev = std::max(std::abs(sm.large - sp * fwd.large),
                                    std::abs(sm.small - sp * fwd.small)) / ref_scale;
        report.scale_covariance_max_deviation =
            std::max(report.scale_covariance_max_deviation, dev);
      }
    }

    // Scalar inequalities at t = |xi| (with the exact-zero stratum at t = 0).
    const double t = xi.norm();
    const ScalarMargins sc = check_scalar(t, params, profile);
    record(ineq["g_bound"], sc.g_bound, config.slack, p, lambda, xi, eta, t, global);
    record(ineq["phi_growth"], sc.phi_growth, config.slack, p, lambda, xi, eta, t, global);
    ++report.total_samples;
  }
}

}  // namespace

double v_vs_h_constant(double p) { return 2.0 + std::pow(2.0, p + 7.0) / (p * p); }

PairMargins check_pair(const AmbientVector& xi, const AmbientVector& eta,
                       const DegenParams& params, const GProfile& profile) {
  if (!xi.allFinite() || !eta.allFinite() || xi.size() != eta.size()) {
    throw InvalidInput("check_pair: vectors must be finite and of equal dimension");
  }
  return pair_margins(xi, eta, params, profile);
}

PairMargins check_pair(const AmbientVector& xi, const AmbientVector& eta,
                       const DegenParams& params, const QuadratureConfig& quad) {
  return check_pair(xi, eta, params, GProfile(params, quad));
}

ScalarMargins check_scalar(double t, const DegenParams& params, const GProfile& profile) {
  if (!(t >= 0.0)) throw InvalidInput("check_scalar: t must be >= 0");
  const double p = params.p();
  const double lambda = params.lambda();
  const double alpha = params.alpha();
  ScalarMargins out;
  const double g = profile(t);
  double bound = 0.0;
  if (t > 0.0) {
    bound = 2.0 / p * std::pow(t, 0.5 * p) * std::pow(t / (t + lambda), 0.5 * (1.0 + 2.0 * alpha));
  }
  out.g_bound = Margin{g, bound};
  const PhiValue phi = phi_weight(t, params);
  out.phi_growth = Margin{phi.derivative * t, 2.0 * alpha * phi.value};
  return out;
}

ScalarMargins check_scalar(double t, const DegenParams& params, const QuadratureConfig& quad) {
  if (!(t >= 0.0)) throw InvalidInput("check_scalar: t must be >= 0");
  return check_scalar(t, params, GProfile(params, quad));
}

std::vector<std::string> SampleConfig::violations() const {
  std::vector<std::string> out;
  if (num_samples < 0) out.emplace_back("num_samples must be >= 0");
  if (p_values.empty()) out.emplace_back("p_values must not be empty");
  for (double p : p_values) {
    if (!(p >= 2.0)) out.emplace_back("every p value must satisfy p >= 2");
  }
  for (double l : lambda_values) {
    if (!(l >= 0.0)) out.emplace_back("every lambda value must satisfy lambda >= 0");
  }
  if (!(magnitude_range.first > 0.0) || !(magnitude_range.first < magnitude_range.second)) {
    out.emplace_back("magnitude range must satisfy 0 < min < max");
  }
  if (!(slack >= 0.0)) out.emplace_back("slack must be >= 0");
  return out;
}

void InequalityStats::merge(const InequalityStats& other) {
  evaluated += other.evaluated;
  violations += other.violations;
  if (!other.has_worst) return;
  if (!has_worst || other.worst_relative < worst_relative ||
      (other.worst_relative == worst_relative && other.sample_index < sample_index)) {
    const auto ev = evaluated;
    const auto vi = violations;
    *this = other;
    evaluated = ev;
    violations = vi;
  }
}

std::int64_t CampaignReport::total_violations() const {
  std::int64_t total = 0;
  for (const auto& [name, stats] : inequalities) total += stats.violations;
  return total;
}

void CampaignReport::merge(const CampaignReport& other) {
  for (const auto& [name, stats] : other.inequalities) inequalities[name].merge(stats);
  for (const auto& [p, sup] : other.lind_sup) {
    auto [it, inserted] = lind_sup.emplace(p, sup);
    if (!inserted) it->second = std::max(it->second, sup);
  }
  symmetry_max_deviation = std::max(symmetry_max_deviation, other.symmetry_max_deviation);
  scale_covariance_max_deviation =
      std::max(scale_covariance_max_deviation, other.scale_covariance_max_deviation);
  total_samples += other.total_samples;
}

const std::vector<std::string>& inequality_names() {
  static const std::vector<std::string> names{"unit_vector", "monotonicity_4p2",
                                              "monotonicity_2p1", "v_vs_h",
                                              "g_bound",     "phi_growth"};
  return names;
}

CampaignReport run_campaign(const SampleConfig& config) {
  const auto bad = config.violations();
  if (!bad.empty()) throw InvalidInput("run_campaign: " + bad.front());

  CampaignReport report;
  for (const auto& name : inequality_names()) report.inequalities[name];
  if (config.num_samples == 0) return report;

  const std::size_t combos = config.p_values.size() * config.lambda_values.size();
  const std::int64_t shards_per_combo = (config.num_samples + kShardSize - 1) / kShardSize;
  const std::int64_t total_shards = static_cast<std::int64_t>(combos) * shards_per_combo;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(total_shards)));

  std::vector<CampaignReport> partial(workers);
  std::atomic<std::int64_t> next{0};
  auto work = [&](unsigned w) {
    for (std::int64_t s = next++; s < total_shards; s = next++) {
      run_shard(config, static_cast<std::size_t>(s / shards_per_combo), s % shards_per_combo,
                partial[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& part : partial) report.merge(part);
  return report;
}

void write_campaign_csv(std::ostream& out, const CampaignReport& report) {
  out << "inequality,evaluated,violations,worst_relative_margin,p,lambda,xi1,xi2,eta1,eta2,t\n";
  out << std::setprecision(17);
  for (const auto& name : inequality_names()) {
    const auto it = report.inequalities.find(name);
    if (it == report.inequalities.end()) continue;
    const auto& s = it->second;
    out << name << ',' << s.evaluated << ',' << s.violations << ',';
    if (s.has_worst) {
      out << s.worst_relative << ',' << s.p << ',' << s.lambda << ',' << s.xi[0] << ','
          << s.xi[1] << ',' << s.eta[0] << ',' << s.eta[1] << ',' << s.t << '\n';
    } else {
      out << ",,,,,,,\n";
    }
  }
}

void write_campaign_summary(std::ostream& out, const CampaignReport& report) {
  out << "samples: " << report.total_samples << "\n";
  for (const auto& name : inequality_names()) {
    const auto it = report.inequalities.find(name);
    if (it == report.inequalities.end()) continue;
    const auto& s = it->second;
    out << "  " << std::left << std::setw(18) << name << " evaluated " << std::setw(10)
        << s.evaluated << " violations " << std::setw(6) << s.violations;
    if (s.has_worst) {
      out << " worst relative margin " << std::setprecision(6) << s.worst_relative << " (p="
          << s.p << ", lambda=" << s.lambda << ")";
    }
    out << "\n";
  }
  for (const auto& [p, sup] : report.lind_sup) {
    out << "  sup |xi-eta|^p/|V(xi)-V(eta)|^2 at p=" << p << ": " << sup << "\n";
  }
  out << "  symmetry deviation " << report.symmetry_max_deviation
      << ", scale covariance deviation " << report.scale_covariance_max_deviation << "\n";
  out << (report.passed() ? "PASS" : "FAIL") << ": " << report.total_violations()
      << " violations\n";
}

}  // namespace degen
