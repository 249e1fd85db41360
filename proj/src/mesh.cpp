#include "wgfem/mesh.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace wgfem {

void MeshParams::validate() const {
  if (n < 4 || n % 4 != 0)
    throw std::invalid_argument("MeshParams: n must be a positive multiple of 4");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("MeshParams: epsilon must lie in (0,1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("MeshParams: lambda must be positive");
}

const char* region_name(Region r) {
  switch (r) {
    case Region::Omega0: return "Omega0";
    case Region::EdgeLayer: return "EdgeLayer";
    case Region::CornerLayer: return "CornerLayer";
  }
  return "?";
}

double transition_parameter(const MeshParams& params) {
  params.validate();
  return std::min(0.25, params.epsilon * params.lambda * std::log(double(params.n)));
}

std::vector<double> axis_points(int n, double tau) {
  if (!(tau > 0.0) || tau > 0.25)
    throw std::invalid_argument("axis_points: tau must lie in (0, 1/4]");
  const double h1 = 4.0 * tau / n;
  const double h2 = 2.0 * (1.0 - 2.0 * tau) / n;
  std::vector<double> pts(n + 1);
  for (int i = 0; i <= n; ++i) {
    if (i <= n / 4)
      pts[i] = i * h1;
    else if (i <= 3 * n / 4)
      pts[i] = tau + (i - n / 4) * h2;
    else
      pts[i] = 1.0 - tau + (i - 3 * n / 4) * h1;
  }
  pts[0] = 0.0;
  pts[n] = 1.0;
  return pts;
}

namespace {

Region classify(double cx, double cy, double tau) {
  const bool x_in = (cx > tau && cx < 1.0 - tau);
  const bool y_in = (cy > tau && cy < 1.0 - tau);
  if (x_in && y_in) return Region::Omega0;
  if (!x_in && !y_in) return Region::CornerLayer;
  return Region::EdgeLayer;
}

}  // namespace

ShishkinMesh build_mesh(const MeshParams& params) {
  params.validate();
  ShishkinMesh mesh;
  mesh.params = params;
  mesh.tau = transition_parameter(params);
  mesh.h1 = 4.0 * mesh.tau / params.n;
  mesh.h2 = 2.0 * (1.0 - 2.0 * mesh.tau) / params.n;
  mesh.x = axis_points(params.n, mesh.tau);
  mesh.y = mesh.x;

  const int n = params.n;
  mesh.nodes.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.nodes.emplace_back(mesh.x[i], mesh.y[j]);

  // Edge ids by construction: horizontals, then verticals, then diagonals.
  const int horiz_base = 0;
  const int vert_base = n * (n + 1);
  const int diag_base = 2 * n * (n + 1);
  mesh.edges.resize(n * (3 * n + 2));
  auto horiz_edge = [&](int i, int j) { return horiz_base + j * n + (i - 1); };  // i in [1,n], j in [0,n]
  auto vert_edge = [&](int i, int j) { return vert_base + (j - 1) * (n + 1) + i; };  // i in [0,n], j in [1,n]
  auto diag_edge = [&](int i, int j) { return diag_base + (j - 1) * n + (i - 1); };  // cell (i,j)

  for (int j = 0; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      Edge& e = mesh.edges[horiz_edge(i, j)];
      e.a = mesh.node_index(i - 1, j);
      e.b = mesh.node_index(i, j);
      e.boundary = (j == 0 || j == n);
    }
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      Edge& e = mesh.edges[vert_edge(i, j)];
      e.a = mesh.node_index(i, j - 1);
      e.b = mesh.node_index(i, j);
      e.boundary = (i == 0 || i == n);
    }
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      Edge& e = mesh.edges[diag_edge(i, j)];
      e.a = mesh.node_index(i, j - 1);      // bottom-right corner of the cell
      e.b = mesh.node_index(i - 1, j);      // top-left corner
      e.boundary = false;
    }

  // Triangles in (j,i) lexicographic cell order, lower half before upper half.
  // hx/hy are assigned from the band index so layer legs equal h1 exactly.
  auto band_size = [&](int i) {
    return (i <= n / 4 || i > 3 * n / 4) ? mesh.h1 : mesh.h2;
  };
  mesh.triangles.reserve(2 * n * n);
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      const int bl = mesh.node_index(i - 1, j - 1);
      const int br = mesh.node_index(i, j - 1);
      const int tl = mesh.node_index(i - 1, j);
      const int tr = mesh.node_index(i, j);
      const double hx = band_size(i);
      const double hy = band_size(j);
      const double cx = 0.5 * (mesh.x[i] + mesh.x[i - 1]);
      const double cy = 0.5 * (mesh.y[j] + mesh.y[j - 1]);
      const Region region = classify(cx, cy, mesh.tau);

      Triangle lower;
      lower.v = {bl, br, tl};
      lower.edge = {horiz_edge(i, j - 1), diag_edge(i, j), vert_edge(i - 1, j)};
      lower.cell_i = i;
      lower.cell_j = j;
      lower.upper = false;
      lower.region = region;
      lower.hx = hx;
      lower.hy = hy;
      mesh.triangles.push_back(lower);

      Triangle upper;
      upper.v = {br, tr, tl};
      upper.edge = {vert_edge(i, j), horiz_edge(i, j), diag_edge(i, j)};
      upper.cell_i = i;
      upper.cell_j = j;
      upper.upper = true;
      upper.region = region;
      upper.hx = hx;
      upper.hy = hy;
      mesh.triangles.push_back(upper);
    }
  }

  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int le = 0; le < 3; ++le) {
      Edge& e = mesh.edges[mesh.triangles[t].edge[le]];
      if (e.tri[0] < 0)
        e.tri[0] = t;
      else {
        assert(e.tri[1] < 0 && "edge with more than two adjacent triangles");
        e.tri[1] = t;
      }
    }

  for (Edge& e : mesh.edges) e.length = (mesh.nodes[e.b] - mesh.nodes[e.a]).norm();
  assign_edge_normals(mesh);
  return mesh;
}

void assign_edge_normals(ShishkinMesh& mesh) {
  for (auto& e : mesh.edges) {
    const Eigen::Vector2d tangent = (mesh.nodes[e.b] - mesh.nodes[e.a]).normalized();
    Eigen::Vector2d normal(tangent.y(), -tangent.x());
    if (normal.x() < -1e-14 || (std::abs(normal.x()) <= 1e-14 && normal.y() < 0.0))
      normal = -normal;
    e.normal = normal;
  }
  for (auto& t : mesh.triangles) {
    for (int le = 0; le < 3; ++le) {
      const Eigen::Vector2d d = mesh.nodes[t.v[(le + 1) % 3]] - mesh.nodes[t.v[le]];
      const Eigen::Vector2d outward = Eigen::Vector2d(d.y(), -d.x()).normalized();
      const double s = mesh.edges[t.edge[le]].normal.dot(outward);
      assert(std::abs(std::abs(s) - 1.0) < 1e-12 && "edge normal must match triangle side");
      t.sign[le] = (s > 0.0) ? 1.0 : -1.0;
    }
  }
}

}  // namespace wgfem
