#include "degen/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "degen/errors.hpp"

namespace degen {

std::vector<std::string> SpaceTimeGrid::violations() const {
  std::vector<std::string> out;
  if (!(length > 0.0) || !std::isfinite(length)) out.emplace_back("grid length must be > 0");
  if (cells < 4) out.emplace_back("grid cells per side must be >= 4");
  if (steps < 1) out.emplace_back("grid time steps must be >= 1");
  if (!(t_end > t_begin)) out.emplace_back("grid time interval must satisfy t_begin < t_end");
  return out;
}

void SpaceTimeGrid::validate() const {
  const auto bad = violations();
  if (!bad.empty()) throw InvalidInput("invalid grid: " + bad.front());
}

VectorField::Vec2 VectorField::centroid(int i, int j, int tri) const {
  const double h = mesh_.h;
  if (tri == 0) return {(i + 1.0 / 3.0) * h, (j + 1.0 / 3.0) * h};
  return {(i + 2.0 / 3.0) * h, (j + 2.0 / 3.0) * h};
}

std::vector<VectorField::Vec2> VectorField::cell_average() const {
  std::vector<Vec2> out(static_cast<std::size_t>(mesh_.cells * mesh_.cells));
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = 0.5 * (values_[2 * c] + values_[2 * c + 1]);
  }
  return out;
}

VectorField discrete_gradient(const ScalarField& u) {
  const Mesh& m = u.mesh();
  VectorField g(m);
  const double inv_h = 1.0 / m.h;
  for (int j = 0; j < m.cells; ++j) {
    for (int i = 0; i < m.cells; ++i) {
      const double u00 = u(i, j);
      const double u10 = u(i + 1, j);
      const double u01 = u(i, j + 1);
      const double u11 = u(i + 1, j + 1);
      g.at(i, j, 0) = {(u10 - u00) * inv_h, (u01 - u00) * inv_h};
      g.at(i, j, 1) = {(u11 - u01) * inv_h, (u11 - u10) * inv_h};
    }
  }
  return g;
}

ScalarField discrete_divergence(const VectorField& field) {
  const Mesh& m = field.mesh();
  ScalarField div(m);
  // div_k = -(1/2) sum_T F_T . dgrad_T/du_k, with dgrad/du entries of size 1/h.
  const double c = 0.5 / m.h;
  for (int j = 0; j < m.cells; ++j) {
    for (int i = 0; i < m.cells; ++i) {
      const auto& lo = field.at(i, j, 0);
      div(i, j) += c * (lo[0] + lo[1]);
      div(i + 1, j) -= c * lo[0];
      div(i, j + 1) -= c * lo[1];
      const auto& up = field.at(i, j, 1);
      div(i + 1, j + 1) -= c * (up[0] + up[1]);
      div(i, j + 1) += c * up[0];
      div(i + 1, j) += c * up[1];
    }
  }
  return div;
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  if (!(a.mesh() == b.mesh())) throw InvalidInput("inner_product: mesh mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) sum += a.values()[k] * b.values()[k];
  return sum * a.mesh().h * a.mesh().h;
}

double inner_product(const VectorField& a, const VectorField& b) {
  if (!(a.mesh() == b.mesh())) throw InvalidInput("inner_product: mesh mismatch");
  double sum = 0.0;
  for (int k = 0; k < a.sample_count(); ++k) sum += a[k].dot(b[k]);
  return sum * a.weight();
}

VectorTrajectory gradient_trajectory(const Trajectory& traj) {
  VectorTrajectory out;
  out.grid = traj.grid;
  out.levels.reserve(traj.levels.size());
  for (const auto& level : traj.levels) out.levels.push_back(discrete_gradient(level));
  return out;
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                     const std::string& metadata_json) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw IoError("cannot write " + path.string());
  for (const auto& level : traj.levels) {
    bin.write(reinterpret_cast<const char*>(level.values().data()),
              static_cast<std::streamsize>(level.values().size() * sizeof(double)));
  }
  nlohmann::json side;
  side["format"] = "float64-le";
  side["layout"] = "level-major, row-major nodes (index = j*(N+1) + i)";
  side["grid"] = {{"length", traj.grid.length},   {"cells", traj.grid.cells},
                  {"t_begin", traj.grid.t_begin}, {"t_end", traj.grid.t_end},
                  {"steps", traj.grid.steps},     {"levels", traj.levels.size()}};
  side["metadata"] = nlohmann::json::parse(metadata_json);
  std::ofstream js(path.string() + ".json");
  if (!js) throw IoError("cannot write " + path.string() + ".json");
  js << side.dump(2) << "\n";
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream js(path.string() + ".json");
  if (!js) throw IoError("cannot read sidecar " + path.string() + ".json");
  const auto side = nlohmann::json::parse(js);
  Trajectory traj;
  const auto& g = side.at("grid");
  traj.grid.length = g.at("length").get<double>();
  traj.grid.cells = g.at("cells").get<int>();
  traj.grid.t_begin = g.at("t_begin").get<double>();
  traj.grid.t_end = g.at("t_end").get<double>();
  traj.grid.steps = g.at("steps").get<int>();
  traj.grid.validate();
  const auto levels = g.at("levels").get<std::size_t>();
  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw IoError("cannot read " + path.string());
  const Mesh mesh = traj.mesh();
  for (std::size_t k = 0; k < levels; ++k) {
    ScalarField level(mesh);
    bin.read(reinterpret_cast<char*>(level.values().data()),
             static_cast<std::streamsize>(level.values().size() * sizeof(double)));
    if (!bin) throw IoError("truncated trajectory file " + path.string());
    traj.levels.push_back(std::move(level));
  }
  return traj;
}

}  // namespace degen
