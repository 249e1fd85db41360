#include "wgfem/weak_ops.hpp"

#include <cassert>

namespace wgfem {

ElementContext make_context(const ShishkinMesh& mesh, int tri_index, int k) {
  const Triangle& tri = mesh.triangles[tri_index];
  ElementContext ctx;
  ctx.tri_index = tri_index;
  ctx.k = k;
  ctx.mesh_n = mesh.params.n;
  ctx.region = tri.region;
  ctx.geo = TriGeometry::from_vertices(mesh.nodes[tri.v[0]], mesh.nodes[tri.v[1]],
                                       mesh.nodes[tri.v[2]]);
  for (int le = 0; le < 3; ++le) {
    const Edge& e = mesh.edges[tri.edge[le]];
    auto& side = ctx.edges[le];
    side.global = tri.edge[le];
    side.length = e.length;
    side.a = mesh.nodes[e.a];
    side.b = mesh.nodes[e.b];
    side.normal_e = e.normal;
    side.sign = tri.sign[le];
    side.outward = side.sign * e.normal;
  }
  return ctx;
}

namespace {

// reference coordinates of the canonical edge parametrization points
Eigen::Matrix<double, Eigen::Dynamic, 2> edge_ref_points(const ElementContext& ctx, int le,
                                                         const Eigen::VectorXd& t) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> ref(t.size(), 2);
  const auto& side = ctx.edges[le];
  for (int q = 0; q < t.size(); ++q) {
    const Eigen::Vector2d p = side.a + t(q) * (side.b - side.a);
    ref.row(q) = ctx.geo.to_reference(p).transpose();
  }
  return ref;
}

}  // namespace

WeakLaplacianOp weak_laplacian_op(const ElementContext& ctx, const QuadRule& tri_rule,
                                  const QuadRule& edge_rule) {
  const int k = ctx.k;
  assert(k >= 2);
  const int m = k - 2;
  const TriBasis& wbasis = TriBasis::get(m);
  const int nw = wbasis.dim();
  const int n0 = ctx.n_interior();

  // P_m mass matrix and (v0, lap psi_w) moments over the element
  const BasisTables wt = eval_tri_basis(ctx.geo, m, tri_rule.points, 2);
  const BasisTables it = eval_tri_basis(ctx.geo, k, tri_rule.points, 0);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nw, nw);
  Eigen::MatrixXd from_interior_raw = Eigen::MatrixXd::Zero(n0, nw);
  for (int q = 0; q < tri_rule.size(); ++q) {
    const double w = tri_rule.weights(q) * ctx.geo.det;
    mass.noalias() += w * wt.val.row(q).transpose() * wt.val.row(q);
    from_interior_raw.noalias() += w * it.val.row(q).transpose() * wt.lap.row(q);
  }

  const EdgeBasis& tbasis = EdgeBasis::get(k);
  const EdgeBasis& gbasis = EdgeBasis::get(k - 1);
  const Eigen::VectorXd t = edge_rule.points.col(0);
  const Eigen::MatrixXd tvals = tbasis.eval(t);
  const Eigen::MatrixXd gvals = gbasis.eval(t);

  Eigen::MatrixXd from_trace_raw = Eigen::MatrixXd::Zero(3 * (k + 1), nw);
  Eigen::MatrixXd from_flux_raw = Eigen::MatrixXd::Zero(3 * k, nw);
  for (int le = 0; le < 3; ++le) {
    const auto& side = ctx.edges[le];
    const auto ref = edge_ref_points(ctx, le, t);
    const BasisTables we = eval_tri_basis(ctx.geo, m, ref, 1);
    for (int q = 0; q < t.size(); ++q) {
      const double w = edge_rule.weights(q) * side.length;
      // -<v_b, grad(psi_w) . n_outward>
      const Eigen::RowVectorXd grad_n =
          we.dx.row(q) * side.outward.x() + we.dy.row(q) * side.outward.y();
      from_trace_raw.block(le * (k + 1), 0, k + 1, nw).noalias() -=
          w * tvals.row(q).transpose() * grad_n;
      // +<v_g * (n_e . n_outward), psi_w>
      from_flux_raw.block(le * k, 0, k, nw).noalias() +=
          (w * side.sign) * gvals.row(q).transpose() * we.val.row(q);
    }
  }

  WeakLaplacianOp op;
  op.target_degree = m;
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  assert(llt.info() == Eigen::Success && "P_{k-2} mass matrix must be SPD");
  op.from_interior = llt.solve(from_interior_raw.transpose()).transpose();
  op.from_trace = llt.solve(from_trace_raw.transpose()).transpose();
  op.from_flux = llt.solve(from_flux_raw.transpose()).transpose();
  return op;
}

WeakGradientOp weak_gradient_op(const ElementContext& ctx, int target_degree,
                                const QuadRule& tri_rule, const QuadRule& edge_rule) {
  const int k = ctx.k;
  assert(k >= 2 && target_degree >= 0);
  const int l = target_degree;
  const TriBasis& lbasis = TriBasis::get(l);
  const int nl = lbasis.dim();
  const int nd = 2 * nl;
  const int n0 = ctx.n_interior();

  const BasisTables lt = eval_tri_basis(ctx.geo, l, tri_rule.points, 1);
  const BasisTables it = eval_tri_basis(ctx.geo, k, tri_rule.points, 0);

  Eigen::MatrixXd scalar_mass = Eigen::MatrixXd::Zero(nl, nl);
  Eigen::MatrixXd div_x = Eigen::MatrixXd::Zero(nl, n0);  // (d_x phi_r, psi_{0,j})
  Eigen::MatrixXd div_y = Eigen::MatrixXd::Zero(nl, n0);
  for (int q = 0; q < tri_rule.size(); ++q) {
    const double w = tri_rule.weights(q) * ctx.geo.det;
    scalar_mass.noalias() += w * lt.val.row(q).transpose() * lt.val.row(q);
    div_x.noalias() += w * lt.dx.row(q).transpose() * it.val.row(q);
    div_y.noalias() += w * lt.dy.row(q).transpose() * it.val.row(q);
  }

  WeakGradientOp op;
  op.target_degree = l;
  op.gram = Eigen::MatrixXd::Zero(nd, nd);
  op.gram.topLeftCorner(nl, nl) = scalar_mass;
  op.gram.bottomRightCorner(nl, nl) = scalar_mass;
  op.div_interior = Eigen::MatrixXd::Zero(nd, n0);
  op.div_interior.topRows(nl) = div_x;
  op.div_interior.bottomRows(nl) = div_y;

  const EdgeBasis& tbasis = EdgeBasis::get(k);
  const Eigen::VectorXd t = edge_rule.points.col(0);
  const Eigen::MatrixXd tvals = tbasis.eval(t);
  op.trace_normal = Eigen::MatrixXd::Zero(nd, 3 * (k + 1));
  for (int le = 0; le < 3; ++le) {
    const auto& side = ctx.edges[le];
    const auto ref = edge_ref_points(ctx, le, t);
    const Eigen::MatrixXd lvals = TriBasis::get(l).eval(ref, 0, 0);
    for (int q = 0; q < t.size(); ++q) {
      const double w = edge_rule.weights(q) * side.length;
      // <v_b, Psi . n_outward>: x-components then y-components of the basis
      op.trace_normal.block(0, le * (k + 1), nl, k + 1).noalias() +=
          (w * side.outward.x()) * lvals.row(q).transpose() * tvals.row(q);
      op.trace_normal.block(nl, le * (k + 1), nl, k + 1).noalias() +=
          (w * side.outward.y()) * lvals.row(q).transpose() * tvals.row(q);
    }
  }

  op.gram_llt.compute(op.gram);
  assert(op.gram_llt.info() == Eigen::Success && "vector mass matrix must be SPD");
  return op;
}

}  // namespace wgfem
