#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace degen {

/// Uniform space-time grid on [0, L]^2 x [t_begin, t_end].
struct SpaceTimeGrid {
  double length = 1.0;
  int cells = 16;  // cells per side, N
  double t_begin = 0.0;
  double t_end = 0.1;
  int steps = 10;  // time steps, M

  double h() const { return length / cells; }
  double tau() const { return (t_end - t_begin) / steps; }
  int nodes_per_side() const { return cells + 1; }
  int node_count() const { return nodes_per_side() * nodes_per_side(); }
  double coord(int i) const { return i * h(); }
  double time(int level) const { return t_begin + level * tau(); }

  std::vector<std::string> violations() const;
  void validate() const;
};

/// Square node lattice shared by scalar and vector fields.
struct Mesh {
  int cells = 0;
  double h = 0.0;

  int side() const { return cells + 1; }
  int node_count() const { return side() * side(); }
  int node(int i, int j) const { return j * side() + i; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == cells || j == cells;
  }
  bool operator==(const Mesh& other) const = default;
};

inline Mesh mesh_of(const SpaceTimeGrid& grid) { return Mesh{grid.cells, grid.h()}; }

/// Node values of one time level.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Mesh mesh, double fill = 0.0)
      : mesh_(mesh), values_(static_cast<std::size_t>(mesh.node_count()), fill) {}

  const Mesh& mesh() const { return mesh_; }
  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(mesh_.node(i, j))]; }
  double operator()(int i, int j) const {
    return values_[static_cast<std::size_t>(mesh_.node(i, j))];
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  template <class F>
  static ScalarField sample(Mesh mesh, F&& f) {
    ScalarField out(mesh);
    for (int j = 0; j < mesh.side(); ++j) {
      for (int i = 0; i < mesh.side(); ++i) out(i, j) = f(i * mesh.h, j * mesh.h);
    }
    return out;
  }

 private:
  Mesh mesh_;
  std::vector<double> values_;
};

/// Piecewise-constant 2-vectors on the two right triangles of each cell.
///
/// Triangle 0 of cell (i, j) has vertices (i,j), (i+1,j), (i,j+1); triangle 1
/// has (i+1,j+1), (i,j+1), (i+1,j). Each sample carries quadrature weight h^2/2.
class VectorField {
 public:
  using Vec2 = Eigen::Vector2d;

  VectorField() = default;
  explicit VectorField(Mesh mesh)
      : mesh_(mesh),
        values_(static_cast<std::size_t>(2 * mesh.cells * mesh.cells), Vec2::Zero()) {}

  const Mesh& mesh() const { return mesh_; }
  int sample_count() const { return static_cast<int>(values_.size()); }
  static int index(const Mesh& mesh, int i, int j, int tri) {
    return 2 * (j * mesh.cells + i) + tri;
  }
  Vec2& at(int i, int j, int tri) { return values_[static_cast<std::size_t>(index(mesh_, i, j, tri))]; }
  const Vec2& at(int i, int j, int tri) const {
    return values_[static_cast<std::size_t>(index(mesh_, i, j, tri))];
  }
  Vec2& operator[](int k) { return values_[static_cast<std::size_t>(k)]; }
  const Vec2& operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
  double weight() const { return 0.5 * mesh_.h * mesh_.h; }
  /// Centroid of triangle `tri` in cell (i, j).
  Vec2 centroid(int i, int j, int tri) const;

  /// Average of the two triangle samples: one vector per cell center.
  std::vector<Vec2> cell_average() const;

 private:
  Mesh mesh_;
  std::vector<Vec2> values_;
};

/// Gradient on each triangle (exact for affine node data).
VectorField discrete_gradient(const ScalarField& u);

/// Node divergence, the negative adjoint of discrete_gradient under the
/// node inner product sum u v h^2 and the triangle inner product sum F.G h^2/2.
ScalarField discrete_divergence(const VectorField& field);

double inner_product(const ScalarField& a, const ScalarField& b);
double inner_product(const VectorField& a, const VectorField& b);

/// Node values of every time level t_begin + k tau, k = 0..M.
struct Trajectory {
  SpaceTimeGrid grid;
  std::vector<ScalarField> levels;

  Mesh mesh() const { return mesh_of(grid); }
};

/// Triangle samples of every time level (gradients, V-fields, fluxes).
struct VectorTrajectory {
  SpaceTimeGrid grid;
  std::vector<VectorField> levels;
};

VectorTrajectory gradient_trajectory(const Trajectory& traj);

/// Flat little-endian float64 array (level-major, then row-major nodes) with
/// a JSON sidecar `<path>.json` carrying the grid and any extra metadata.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                     const std::string& metadata_json = "{}");
Trajectory load_trajectory(const std::filesystem::path& path);

}  // namespace degen
