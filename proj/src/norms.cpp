#include "wgfem/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace wgfem {

WeakFunction interpolate(const ProblemSpec& problem, const ShishkinMesh& mesh,
                         const Discretization& disc) {
  if (!problem.exact.has_value())
    throw std::invalid_argument("interpolate: problem has no exact solution");
  const ExactSolution& exact = *problem.exact;
  const int k = disc.k;
  const DofMap dofs = make_dof_map(mesh, k);
  WeakFunction u = WeakFunction::zero(dofs);

  auto value = [&exact](const Eigen::Vector2d& p) { return exact.value(p.x(), p.y()); };
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const TriGeometry geo = TriGeometry::from_vertices(
        mesh.nodes[tri.v[0]], mesh.nodes[tri.v[1]], mesh.nodes[tri.v[2]]);
    u.interior(dofs, t) = lagrange_interpolate_on_tri(value, geo, k);
  }
  const int npts = disc.edge_points();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges[e];
    const Eigen::Vector2d a = mesh.nodes[edge.a];
    const Eigen::Vector2d b = mesh.nodes[edge.b];
    u.trace(dofs, e) = l2_project_on_edge(value, a, b, k, npts);
    const Eigen::Vector2d n = edge.normal;
    auto flux = [&exact, n](const Eigen::Vector2d& p) {
      return exact.grad(p.x(), p.y()).dot(n);
    };
    u.flux(dofs, e) = l2_project_on_edge(flux, a, b, k - 1, npts);
  }
  return u;
}

Eigen::VectorXd boundary_values(const ProblemSpec& problem, const ShishkinMesh& mesh,
                                const Discretization& disc) {
  const DofMap dofs = make_dof_map(mesh, disc.k);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(dofs.total);
  if (problem.boundary == BoundaryMode::HomogeneousClamped) return values;
  if (!problem.exact.has_value())
    throw std::invalid_argument("boundary_values: from-exact mode needs an exact solution");
  const ExactSolution& exact = *problem.exact;
  const int k = disc.k;
  const int npts = disc.edge_points();
  auto value = [&exact](const Eigen::Vector2d& p) { return exact.value(p.x(), p.y()); };
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges[e];
    if (!edge.boundary) continue;
    const Eigen::Vector2d a = mesh.nodes[edge.a];
    const Eigen::Vector2d b = mesh.nodes[edge.b];
    values.segment(dofs.trace_dof(e, 0), k + 1) = l2_project_on_edge(value, a, b, k, npts);
    const Eigen::Vector2d n = edge.normal;
    auto flux = [&exact, n](const Eigen::Vector2d& p) {
      return exact.grad(p.x(), p.y()).dot(n);
    };
    values.segment(dofs.flux_dof(e, 0), k) = l2_project_on_edge(flux, a, b, k - 1, npts);
  }
  return values;
}

namespace {

// stabilizer energy of a discrete weak function, summed per element boundary
double stabilizer_energy(const WeakFunction& u, const ShishkinMesh& mesh,
                         const Discretization& disc, double epsilon, const DofMap& dofs) {
  const int k = disc.k;
  const QuadRule& edge_rule = edge_rule_cached(disc.edge_points());
  const Eigen::VectorXd t = edge_rule.points.col(0);
  const Eigen::MatrixXd tvals = EdgeBasis::get(k).eval(t);
  const Eigen::MatrixXd gvals = EdgeBasis::get(k - 1).eval(t);

  double acc = 0.0;
  for (int ti = 0; ti < mesh.num_triangles(); ++ti) {
    const ElementContext ctx = make_context(mesh, ti, k);
    const auto [rho, sigma] = stabilizer_parameters(ctx.region, epsilon, mesh.params.n);
    const Eigen::VectorXd v0 = u.coeffs.segment(dofs.interior_dof(ti, 0), dofs.n0);
    for (int le = 0; le < 3; ++le) {
      const auto& side = ctx.edges[le];
      Eigen::Matrix<double, Eigen::Dynamic, 2> ref(t.size(), 2);
      for (int q = 0; q < t.size(); ++q)
        ref.row(q) = ctx.geo.to_reference(side.a + t(q) * (side.b - side.a)).transpose();
      const BasisTables bt = eval_tri_basis(ctx.geo, k, ref, 1);
      const Eigen::VectorXd vb = u.coeffs.segment(dofs.trace_dof(side.global, 0), k + 1);
      const Eigen::VectorXd vg = u.coeffs.segment(dofs.flux_dof(side.global, 0), k);
      for (int q = 0; q < t.size(); ++q) {
        const double w = edge_rule.weights(q) * side.length;
        const double jump_val = bt.val.row(q).dot(v0) - tvals.row(q).dot(vb);
        const double grad_n = bt.dx.row(q).dot(v0) * side.normal_e.x() +
                              bt.dy.row(q).dot(v0) * side.normal_e.y();
        const double jump_flux = grad_n - gvals.row(q).dot(vg);
        acc += w * (sigma * jump_val * jump_val + rho * jump_flux * jump_flux);
      }
    }
  }
  return acc;
}

}  // namespace

ErrorBreakdown triple_norm_discrete(const WeakFunction& diff, const ShishkinMesh& mesh,
                                    const Discretization& disc, const ProblemSpec& problem) {
  const int k = disc.k;
  const DofMap dofs = make_dof_map(mesh, k);
  const QuadRule& tri_rule = tri_rule_cached(disc.tri_degree());
  const double eps2 = problem.epsilon * problem.epsilon;

  ErrorBreakdown out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementContext ctx = make_context(mesh, t, k);
    const BasisTables bt = eval_tri_basis(ctx.geo, k, tri_rule.points, 2);
    const Eigen::VectorXd v0 = diff.coeffs.segment(dofs.interior_dof(t, 0), dofs.n0);
    for (int q = 0; q < tri_rule.size(); ++q) {
      const double w = tri_rule.weights(q) * ctx.geo.det;
      const Eigen::Vector2d p = ctx.geo.to_physical(tri_rule.points.row(q).transpose());
      const double lap = bt.lap.row(q).dot(v0);
      const double gx = bt.dx.row(q).dot(v0);
      const double gy = bt.dy.row(q).dot(v0);
      const double av = problem.a(p.x(), p.y()) * bt.val.row(q).dot(v0);
      out.lap_term += w * eps2 * lap * lap;
      out.grad_term += w * (gx * gx + gy * gy);
      out.react_term += w * av * av;
    }
  }
  out.stab_term = stabilizer_energy(diff, mesh, disc, problem.epsilon, dofs);
  out.total = std::sqrt(out.lap_term + out.grad_term + out.react_term + out.stab_term);
  return out;
}

ErrorBreakdown triple_norm_vs_exact(const WeakFunction& uh, const ShishkinMesh& mesh,
                                    const Discretization& disc, const ProblemSpec& problem) {
  if (!problem.exact.has_value())
    throw std::invalid_argument("triple_norm_vs_exact: problem has no exact solution");
  const ExactSolution& exact = *problem.exact;
  const int k = disc.k;
  const DofMap dofs = make_dof_map(mesh, k);
  const QuadRule& tri_rule = tri_rule_cached(disc.tri_degree());
  const double eps2 = problem.epsilon * problem.epsilon;

  ErrorBreakdown out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementContext ctx = make_context(mesh, t, k);
    const BasisTables bt = eval_tri_basis(ctx.geo, k, tri_rule.points, 2);
    const Eigen::VectorXd v0 = uh.coeffs.segment(dofs.interior_dof(t, 0), dofs.n0);
    for (int q = 0; q < tri_rule.size(); ++q) {
      const double w = tri_rule.weights(q) * ctx.geo.det;
      const Eigen::Vector2d p = ctx.geo.to_physical(tri_rule.points.row(q).transpose());
      const Jet uj = exact.jet(p.x(), p.y());
      const double lap = uj.lap() - bt.lap.row(q).dot(v0);
      const double gx = uj.d[1][0] - bt.dx.row(q).dot(v0);
      const double gy = uj.d[0][1] - bt.dy.row(q).dot(v0);
      const double av = problem.a(p.x(), p.y()) * (uj.value() - bt.val.row(q).dot(v0));
      out.lap_term += w * eps2 * lap * lap;
      out.grad_term += w * (gx * gx + gy * gy);
      out.react_term += w * av * av;
    }
  }
  // the exact solution is single-valued, so the jump terms of u - u_N reduce
  // to the jump terms of u_N
  out.stab_term = stabilizer_energy(uh, mesh, disc, problem.epsilon, dofs);
  out.total = std::sqrt(out.lap_term + out.grad_term + out.react_term + out.stab_term);
  return out;
}

double energy_norm(const WeakFunction& v, const GlobalSystem& system) {
  const double q = v.coeffs.dot(system.full * v.coeffs);
  if (q < -1e-10 * (1.0 + v.coeffs.squaredNorm()))
    throw std::runtime_error("energy_norm: negative quadratic form");
  return std::sqrt(std::max(q, 0.0));
}

std::vector<double> convergence_orders(const std::vector<std::pair<int, double>>& errors) {
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const auto& [n0, e0] = errors[i];
    const auto& [n1, e1] = errors[i + 1];
    if (n1 != 2 * n0)
      throw std::invalid_argument("convergence_orders: N must double between entries");
    if (!(e0 > 0.0) || !(e1 > 0.0))
      throw std::invalid_argument("convergence_orders: errors must be positive");
    orders.push_back(std::log2(e0 / e1));
  }
  return orders;
}

}  // namespace wgfem
