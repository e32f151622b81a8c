#include "degen/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "degen/errors.hpp"

namespace degen {
namespace {

constexpr double kPi = std::numbers::pi;

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

struct Offset {
  int di;
  int dj;
  double w;
};

std::vector<Offset> spatial_kernel(double eps, double h) {
  const int reach = static_cast<int>(std::ceil(eps / h));
  std::vector<Offset> out;
  double mass = 0.0;
  for (int dj = -reach; dj <= reach; ++dj) {
    for (int di = -reach; di <= reach; ++di) {
      const double r2 = (di * di + dj * dj) * h * h / (eps * eps);
      const double w = bump(r2);
      if (w > 0.0) {
        out.push_back({di, dj, w});
        mass += w;
      }
    }
  }
  for (auto& o : out) o.w /= mass;
  return out;
}

std::vector<double> temporal_kernel(double eps, double tau, int& reach) {
  reach = static_cast<int>(std::ceil(eps / tau));
  std::vector<double> w(static_cast<std::size_t>(2 * reach + 1));
  double mass = 0.0;
  for (int k = -reach; k <= reach; ++k) {
    const double s = k * tau / eps;
    w[static_cast<std::size_t>(k + reach)] = bump(s * s);
    mass += w[static_cast<std::size_t>(k + reach)];
  }
  for (auto& x : w) x /= mass;
  return w;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"heat_sine", "linear_drift", "cone", "mms_smooth"};
  return names;
}

double mms_smooth_source(double x, double y, double t, double p, double lambda) {
  const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
  const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
  const double a = 1.0 + t;
  const double dt_u = sx * sy;
  const double g1 = a * kPi * cx * sy;
  const double g2 = a * kPi * sx * cy;
  const double uxx = -a * kPi * kPi * sx * sy;
  const double uxy = a * kPi * kPi * cx * cy;
  const double lap = 2.0 * uxx;
  const double r = std::hypot(g1, g2);
  double div = 0.0;
  if (p == 2.0 && lambda == 0.0) {
    div = lap;
  } else if (r > lambda && r > 0.0) {
    const double phi = std::pow(r - lambda, p - 1.0);
    const double dphi = (p - 1.0) * std::pow(r - lambda, p - 2.0);
    const double quad = uxx * (g1 * g1 + g2 * g2) + 2.0 * uxy * g1 * g2;
    div = phi / r * lap + (dphi - phi / r) * quad / (r * r);
  }
  return dt_u - div;
}

ProblemSpec manufactured_problem(const std::string& name, const SpaceTimeGrid& grid,
                                 const DegenParams& params) {
  grid.validate();
  ProblemSpec spec;
  spec.name = name;
  spec.grid = grid;
  spec.params = params;
  const double L = grid.length;
  const double lambda = params.lambda();
  if (name == "heat_sine") {
    if (params.p() != 2.0 || lambda != 0.0) {
      throw InvalidInput("heat_sine requires p = 2 and lambda = 0");
    }
    const double rate = 2.0 * (1.0 + params.eps()) * kPi * kPi / (L * L);
    spec.reference = [rate, L](double x, double y, double t) {
      return std::exp(-rate * t) * std::sin(kPi * x / L) * std::sin(kPi * y / L);
    };
    spec.exact = true;
  } else if (name == "linear_drift") {
    const double slope = 0.5 * lambda;
    spec.reference = [slope](double x, double, double) { return slope * x; };
    spec.exact = true;
  } else if (name == "cone") {
    const double c = 0.5 * L + 0.5 * grid.h();
    spec.reference = [lambda, c](double x, double y, double) {
      return lambda * std::hypot(x - c, y - c);
    };
    spec.exact = true;
  } else if (name == "mms_smooth") {
    if (L != 1.0) throw InvalidInput("mms_smooth is defined on the unit square");
    spec.reference = [](double x, double y, double t) {
      return (1.0 + t) * std::sin(kPi * x) * std::sin(kPi * y);
    };
    const double p = params.p();
    spec.source = [p, lambda](double x, double y, double t) {
      return mms_smooth_source(x, y, t, p, lambda);
    };
    spec.exact = true;
  } else {
    throw CatalogError("unknown problem '" + name + "'");
  }
  return spec;
}

Trajectory mollify_source(const Trajectory& f, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("mollify_source: eps must lie in (0, 1]");
  const Mesh m = f.mesh();
  const int n = m.side();
  const auto kernel = spatial_kernel(eps, m.h);
  Trajectory space = f;
  for (std::size_t k = 0; k < f.levels.size(); ++k) {
    const ScalarField& src = f.levels[k];
    ScalarField& dst = space.levels[k];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& o : kernel) {
          const int ii = i - o.di, jj = j - o.dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          acc += o.w * src(ii, jj);
        }
        dst(i, j) = acc;
      }
    }
  }
  int reach = 0;
  const auto wt = temporal_kernel(eps, f.grid.tau(), reach);
  Trajectory out = space;
  const int levels = static_cast<int>(f.levels.size());
  for (int k = 0; k < levels; ++k) {
    auto& dst = out.levels[static_cast<std::size_t>(k)].values();
    std::fill(dst.begin(), dst.end(), 0.0);
    for (int d = -reach; d <= reach; ++d) {
      const int kk = k - d;
      if (kk < 0 || kk >= levels) continue;
      const double w = wt[static_cast<std::size_t>(d + reach)];
      const auto& src = space.levels[static_cast<std::size_t>(kk)].values();
      for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += w * src[q];
    }
  }
  return out;
}

std::vector<ScalarField> source_levels(const ProblemSpec& spec) {
  const SpaceTimeGrid& g = spec.grid;
  const Mesh m = mesh_of(g);
  const int levels = g.steps + 1;
  const double eps = spec.params.eps();
  if (spec.sampled_source) {
    const Trajectory& s = *spec.sampled_source;
    if (!(s.mesh() == m) || static_cast<int>(s.levels.size()) != levels) {
      throw InvalidInput("sampled source does not match the problem grid");
    }
    return spec.mollify ? mollify_source(s, std::min(eps, 1.0)).levels : s.levels;
  }
  if (!spec.source) return std::vector<ScalarField>(static_cast<std::size_t>(levels), ScalarField(m));
  const int pad = spec.mollify ? static_cast<int>(std::ceil(std::min(eps, 1.0) / g.tau())) : 0;
  Trajectory padded;
  padded.grid = g;
  padded.grid.t_begin = g.t_begin - pad * g.tau();
  padded.grid.t_end = g.t_end + pad * g.tau();
  padded.grid.steps = g.steps + 2 * pad;
  for (int k = 0; k <= padded.grid.steps; ++k) {
    const double t = g.time(k - pad);
    padded.levels.push_back(
        ScalarField::sample(m, [&](double x, double y) { return spec.source(x, y, t); }));
  }
  if (spec.mollify) padded = mollify_source(padded, std::min(eps, 1.0));
  return {padded.levels.begin() + pad, padded.levels.begin() + pad + levels};
}

Trajectory sample_reference(const ProblemSpec& spec) {
  Trajectory out;
  out.grid = spec.grid;
  const Mesh m = mesh_of(spec.grid);
  for (int k = 0; k <= spec.grid.steps; ++k) {
    const double t = spec.grid.time(k);
    out.levels.push_back(
        ScalarField::sample(m, [&](double x, double y) { return spec.reference(x, y, t); }));
  }
  return out;
}

}  // namespace degen
