#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace wgfem {

struct MeshParams {
  int n = 4;             // elements per axis, positive multiple of 4
  double epsilon = 1.0;  // perturbation parameter, in (0,1)
  double lambda = 3.0;   // mesh grading constant, > 0

  void validate() const;  // throws std::invalid_argument
};

enum class Region : std::uint8_t { Omega0 = 0, EdgeLayer = 1, CornerLayer = 2 };

const char* region_name(Region r);

struct Triangle {
  std::array<int, 3> v{};          // node indices, counterclockwise
  std::array<int, 3> edge{};       // global edge ids; local edge i joins v[i], v[(i+1)%3]
  std::array<double, 3> sign{};    // n_e . n_outward per local edge, +1 or -1
  int cell_i = 0, cell_j = 0;      // parent rectangle indices, 1-based
  bool upper = false;              // upper-right half of the parent rectangle
  Region region = Region::Omega0;
  double hx = 0.0, hy = 0.0;       // parent rectangle extents
};

struct Edge {
  int a = -1, b = -1;  // node indices, a < b; parametrized from a to b
  Eigen::Vector2d normal{0.0, 0.0};  // fixed unit normal n_e
  std::array<int, 2> tri{-1, -1};    // adjacent triangles, tri[1] = -1 on the boundary
  double length = 0.0;
  bool boundary = false;
};

/// Layer-adapted triangulation of the unit square: tensor-product Shishkin
/// points, each cell split by its off-diagonal (top-left to bottom-right).
struct ShishkinMesh {
  MeshParams params;
  double tau = 0.0;       // realized transition parameter
  double h1 = 0.0, h2 = 0.0;
  std::vector<double> x, y;  // axis points, size n+1
  std::vector<Eigen::Vector2d> nodes;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int node_index(int i, int j) const { return j * (params.n + 1) + i; }
};

/// tau = min{1/4, epsilon * lambda * ln N}.
double transition_parameter(const MeshParams& params);

/// Piecewise-uniform 1D Shishkin points, n+1 values from 0 to 1.
std::vector<double> axis_points(int n, double tau);

ShishkinMesh build_mesh(const MeshParams& params);

/// Recomputes the deterministic edge normals (positive x-component; if that is
/// zero, positive y-component) and the per-triangle signs n_e . n_outward.
/// Called by build_mesh; exposed for testing.
void assign_edge_normals(ShishkinMesh& mesh);

}  // namespace wgfem
