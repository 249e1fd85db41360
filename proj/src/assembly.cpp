#include "wgfem/assembly.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace wgfem {

void Discretization::validate() const {
  if (k < 2 || k > 3) throw std::invalid_argument("Discretization: k must be 2 or 3");
  if (wgrad_degree >= 0 && wgrad_degree != k - 1 && wgrad_degree != k)
    throw std::invalid_argument("Discretization: weak-gradient degree must be k-1 or k");
  if (quad_tri_degree >= 0 && quad_tri_degree < 2 * k)
    throw std::invalid_argument("Discretization: triangle quadrature degree too low");
  if (quad_edge_points >= 0 && quad_edge_points < k + 1)
    throw std::invalid_argument("Discretization: too few edge quadrature points");
}

Eigen::Index DofMap::num_boundary() const {
  Eigen::Index c = 0;
  for (char b : boundary_dof) c += (b != 0);
  return c;
}

DofMap make_dof_map(const ShishkinMesh& mesh, int k) {
  DofMap d;
  d.k = k;
  d.n_tri = mesh.num_triangles();
  d.n_edge = mesh.num_edges();
  d.n0 = (k + 1) * (k + 2) / 2;
  d.trace_offset = Eigen::Index(d.n_tri) * d.n0;
  d.flux_offset = d.trace_offset + Eigen::Index(d.n_edge) * (k + 1);
  d.total = d.flux_offset + Eigen::Index(d.n_edge) * k;
  d.boundary_dof.assign(d.total, 0);
  for (int e = 0; e < d.n_edge; ++e) {
    if (!mesh.edges[e].boundary) continue;
    for (int i = 0; i <= k; ++i) d.boundary_dof[d.trace_dof(e, i)] = 1;
    for (int i = 0; i < k; ++i) d.boundary_dof[d.flux_dof(e, i)] = 1;
  }
  return d;
}

Eigen::VectorXd gather_local(const WeakFunction& u, const DofMap& dofs,
                             const ShishkinMesh& mesh, int t) {
  const int k = dofs.k;
  const Triangle& tri = mesh.triangles[t];
  Eigen::VectorXd loc(dofs.n0 + 3 * (2 * k + 1));
  loc.head(dofs.n0) = u.coeffs.segment(dofs.interior_dof(t, 0), dofs.n0);
  for (int le = 0; le < 3; ++le)
    loc.segment(dofs.n0 + le * (k + 1), k + 1) =
        u.coeffs.segment(dofs.trace_dof(tri.edge[le], 0), k + 1);
  for (int le = 0; le < 3; ++le)
    loc.segment(dofs.n0 + 3 * (k + 1) + le * k, k) =
        u.coeffs.segment(dofs.flux_dof(tri.edge[le], 0), k);
  return loc;
}

std::pair<double, double> stabilizer_parameters(Region region, double epsilon, int n) {
  const double ln_n = std::log(double(n));
  if (region == Region::Omega0) return {epsilon * n, double(n)};
  const double ratio = n / ln_n;
  return {epsilon * n / ln_n, ratio * ratio * ratio / epsilon};
}

ElementMatrices element_matrices(const ElementContext& ctx, const Discretization& disc,
                                 double epsilon, const std::function<double(double, double)>& a,
                                 const QuadRule& tri_rule) {
  const int k = ctx.k;
  const int m = k - 2;
  const int l = disc.grad_degree();
  const int nw = (m + 1) * (m + 2) / 2;
  const int nl = (l + 1) * (l + 2) / 2;
  const int n0 = ctx.n_interior();

  const BasisTables wt = eval_tri_basis(ctx.geo, m, tri_rule.points, 0);
  const BasisTables lt = eval_tri_basis(ctx.geo, l, tri_rule.points, 0);
  const BasisTables it = eval_tri_basis(ctx.geo, k, tri_rule.points, 0);

  ElementMatrices em;
  em.mass_wlap = Eigen::MatrixXd::Zero(nw, nw);
  Eigen::MatrixXd scalar_mass = Eigen::MatrixXd::Zero(nl, nl);
  em.mass_react = Eigen::MatrixXd::Zero(n0, n0);
  const double eps2 = epsilon * epsilon;
  for (int q = 0; q < tri_rule.size(); ++q) {
    const double w = tri_rule.weights(q) * ctx.geo.det;
    const Eigen::Vector2d p = ctx.geo.to_physical(tri_rule.points.row(q).transpose());
    em.mass_wlap.noalias() += (eps2 * w) * wt.val.row(q).transpose() * wt.val.row(q);
    scalar_mass.noalias() += w * lt.val.row(q).transpose() * lt.val.row(q);
    em.mass_react.noalias() +=
        (w * a(p.x(), p.y())) * it.val.row(q).transpose() * it.val.row(q);
  }
  em.mass_wgrad = Eigen::MatrixXd::Zero(2 * nl, 2 * nl);
  em.mass_wgrad.topLeftCorner(nl, nl) = scalar_mass;
  em.mass_wgrad.bottomRightCorner(nl, nl) = scalar_mass;
  return em;
}

Eigen::MatrixXd stabilizer_local(const ElementContext& ctx, double rho, double sigma,
                                 const QuadRule& edge_rule) {
  const int k = ctx.k;
  const int n0 = ctx.n_interior();
  const int nloc = ctx.n_local();
  const int trace_base = n0;
  const int flux_base = n0 + 3 * (k + 1);

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nloc, nloc);
  const EdgeBasis& tbasis = EdgeBasis::get(k);
  const EdgeBasis& gbasis = EdgeBasis::get(k - 1);
  const Eigen::VectorXd t = edge_rule.points.col(0);
  const Eigen::MatrixXd tvals = tbasis.eval(t);
  const Eigen::MatrixXd gvals = gbasis.eval(t);

  for (int le = 0; le < 3; ++le) {
    const auto& side = ctx.edges[le];
    Eigen::Matrix<double, Eigen::Dynamic, 2> ref(t.size(), 2);
    for (int q = 0; q < t.size(); ++q)
      ref.row(q) = ctx.geo.to_reference(side.a + t(q) * (side.b - side.a)).transpose();
    const BasisTables it = eval_tri_basis(ctx.geo, k, ref, 1);

    for (int q = 0; q < t.size(); ++q) {
      const double w = edge_rule.weights(q) * side.length;
      // jump vector for sigma <u0 - u_b, v0 - v_b>: u0 trace minus edge basis.
      // The weight is folded into the vector so the outer product is bitwise
      // symmetric, which the assembled operator relies on.
      Eigen::RowVectorXd jump_val = Eigen::RowVectorXd::Zero(nloc);
      jump_val.segment(0, n0) = it.val.row(q);
      jump_val.segment(trace_base + le * (k + 1), k + 1) = -tvals.row(q);
      jump_val *= std::sqrt(sigma * w);
      s.noalias() += jump_val.transpose() * jump_val;
      // jump vector for rho <grad u0 . n_e - u_g, ...> against the fixed normal
      Eigen::RowVectorXd jump_flux = Eigen::RowVectorXd::Zero(nloc);
      jump_flux.segment(0, n0) =
          it.dx.row(q) * side.normal_e.x() + it.dy.row(q) * side.normal_e.y();
      jump_flux.segment(flux_base + le * k, k) = -gvals.row(q);
      jump_flux *= std::sqrt(rho * w);
      s.noalias() += jump_flux.transpose() * jump_flux;
    }
  }
  return s;
}

LocalStiffness local_stiffness(const ElementContext& ctx, const Discretization& disc,
                               const ProblemSpec& problem) {
  const QuadRule& tri_rule = tri_rule_cached(disc.tri_degree());
  const QuadRule& edge_rule = edge_rule_cached(disc.edge_points());

  const WeakLaplacianOp wlap = weak_laplacian_op(ctx, tri_rule, edge_rule);
  const WeakGradientOp wgrad = weak_gradient_op(ctx, disc.grad_degree(), tri_rule, edge_rule);
  const ElementMatrices em =
      element_matrices(ctx, disc, problem.epsilon, problem.a, tri_rule);

  const int n0 = ctx.n_interior();
  const int nb = ctx.n_trace();
  const int ng = ctx.n_flux();
  const int nloc = ctx.n_local();

  // gradient images: G0 = D^{-1} E (with the sign applied at use sites),
  // Gb = D^{-1} F; the blocks below implement the product formulas of the
  // local stiffness lemma.
  const Eigen::MatrixXd g0 = wgrad.gram_llt.solve(wgrad.div_interior);   // (Nd x N0)
  const Eigen::MatrixXd gb = wgrad.gram_llt.solve(wgrad.trace_normal);   // (Nd x Nb)
  const Eigen::MatrixXd bg0 = em.mass_wgrad * g0;
  const Eigen::MatrixXd bgb = em.mass_wgrad * gb;

  const Eigen::MatrixXd a_c0t = em.mass_wlap * wlap.from_interior.transpose();  // (Nw x N0)
  const Eigen::MatrixXd a_cbt = em.mass_wlap * wlap.from_trace.transpose();
  const Eigen::MatrixXd a_cgt = em.mass_wlap * wlap.from_flux.transpose();

  LocalStiffness ls;
  ls.mat.setZero(nloc, nloc);
  auto b00 = ls.mat.block(0, 0, n0, n0);
  auto b0b = ls.mat.block(0, n0, n0, nb);
  auto b0g = ls.mat.block(0, n0 + nb, n0, ng);
  auto bb0 = ls.mat.block(n0, 0, nb, n0);
  auto bbb = ls.mat.block(n0, n0, nb, nb);
  auto bbg = ls.mat.block(n0, n0 + nb, nb, ng);
  auto bg0_ = ls.mat.block(n0 + nb, 0, ng, n0);
  auto bgb_ = ls.mat.block(n0 + nb, n0, ng, nb);
  auto bgg = ls.mat.block(n0 + nb, n0 + nb, ng, ng);

  b00 = wlap.from_interior * a_c0t + g0.transpose() * bg0 + em.mass_react;
  b0b = wlap.from_interior * a_cbt - g0.transpose() * bgb;
  b0g = wlap.from_interior * a_cgt;
  bb0 = wlap.from_trace * a_c0t - gb.transpose() * bg0;
  bbb = wlap.from_trace * a_cbt + gb.transpose() * bgb;
  bbg = wlap.from_trace * a_cgt;
  bg0_ = wlap.from_flux * a_c0t;
  bgb_ = wlap.from_flux * a_cbt;
  bgg = wlap.from_flux * a_cgt;

  // symmetrize: the off-diagonal blocks are evaluated by formulas that are
  // only transposes of each other up to rounding, and the scattered global
  // matrix must be exactly symmetric
  ls.mat = 0.5 * (ls.mat + ls.mat.transpose()).eval();
  ls.weak_part = ls.mat;
  const auto [rho, sigma] =
      stabilizer_parameters(ctx.region, problem.epsilon, ctx.mesh_n);
  ls.mat += stabilizer_local(ctx, rho, sigma, edge_rule);
  return ls;
}

GlobalSystem assemble(const ShishkinMesh& mesh, const Discretization& disc,
                      const ProblemSpec& problem) {
  disc.validate();
  const int k = disc.k;
  const DofMap dofs = make_dof_map(mesh, k);
  const QuadRule& tri_rule = tri_rule_cached(disc.tri_degree());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(std::size_t(mesh.num_triangles()) *
                   std::size_t((dofs.n0 + 3 * (2 * k + 1)) * (dofs.n0 + 3 * (2 * k + 1))));
  Eigen::VectorXd load = Eigen::VectorXd::Zero(dofs.total);

  std::vector<Eigen::Index> local_to_global(dofs.n0 + 3 * (2 * k + 1));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementContext ctx = make_context(mesh, t, k);
    if (!(ctx.geo.area > 0.0)) throw std::runtime_error("assemble: zero-measure element");

    const LocalStiffness ls = local_stiffness(ctx, disc, problem);

    const Triangle& tri = mesh.triangles[t];
    int idx = 0;
    for (int i = 0; i < dofs.n0; ++i) local_to_global[idx++] = dofs.interior_dof(t, i);
    for (int le = 0; le < 3; ++le)
      for (int i = 0; i <= k; ++i) local_to_global[idx++] = dofs.trace_dof(tri.edge[le], i);
    for (int le = 0; le < 3; ++le)
      for (int i = 0; i < k; ++i) local_to_global[idx++] = dofs.flux_dof(tri.edge[le], i);
    assert(idx == int(local_to_global.size()));

    for (int i = 0; i < idx; ++i)
      for (int j = 0; j < idx; ++j)
        triplets.emplace_back(local_to_global[i], local_to_global[j], ls.mat(i, j));

    // load vector: (g, psi_0) on the interior block only
    const BasisTables it = eval_tri_basis(ctx.geo, k, tri_rule.points, 0);
    for (int q = 0; q < tri_rule.size(); ++q) {
      const double w = tri_rule.weights(q) * ctx.geo.det;
      const Eigen::Vector2d p = ctx.geo.to_physical(tri_rule.points.row(q).transpose());
      const double gq = problem.g(p.x(), p.y());
      for (int i = 0; i < dofs.n0; ++i)
        load(dofs.interior_dof(t, i)) += w * gq * it.val(q, i);
    }
  }

  GlobalSystem sys;
  sys.dofs = dofs;
  sys.full.resize(dofs.total, dofs.total);
  sys.full.setFromTriplets(triplets.begin(), triplets.end());
  sys.full.makeCompressed();
  sys.load = std::move(load);
  sys.free_dofs.reserve(dofs.total - dofs.num_boundary());
  for (Eigen::Index i = 0; i < dofs.total; ++i)
    if (!dofs.boundary_dof[i]) sys.free_dofs.push_back(i);
  return sys;
}

std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> GlobalSystem::reduce(
    const Eigen::VectorXd& fixed_values) const {
  const Eigen::Index n_free = Eigen::Index(free_dofs.size());
  std::vector<Eigen::Index> old_to_new(dofs.total, -1);
  for (Eigen::Index i = 0; i < n_free; ++i) old_to_new[free_dofs[i]] = i;

  Eigen::VectorXd lift = Eigen::VectorXd::Zero(dofs.total);
  for (Eigen::Index i = 0; i < dofs.total; ++i)
    if (dofs.boundary_dof[i]) lift(i) = fixed_values(i);

  const Eigen::VectorXd coupled = full * lift;
  Eigen::VectorXd b(n_free);
  for (Eigen::Index i = 0; i < n_free; ++i)
    b(i) = load(free_dofs[i]) - coupled(free_dofs[i]);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(std::size_t(full.nonZeros()));
  for (int col = 0; col < full.outerSize(); ++col) {
    const Eigen::Index nc = old_to_new[col];
    if (nc < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, col); it; ++it) {
      const Eigen::Index nr = old_to_new[it.row()];
      if (nr >= 0) triplets.emplace_back(nr, nc, it.value());
    }
  }
  Eigen::SparseMatrix<double> reduced(n_free, n_free);
  reduced.setFromTriplets(triplets.begin(), triplets.end());
  reduced.makeCompressed();
  return {std::move(reduced), std::move(b)};
}

WeakFunction GlobalSystem::expand(const Eigen::VectorXd& x_reduced,
                                  const Eigen::VectorXd& fixed_values) const {
  WeakFunction u{Eigen::VectorXd::Zero(dofs.total)};
  for (Eigen::Index i = 0; i < Eigen::Index(free_dofs.size()); ++i)
    u.coeffs(free_dofs[i]) = x_reduced(i);
  for (Eigen::Index i = 0; i < dofs.total; ++i)
    if (dofs.boundary_dof[i]) u.coeffs(i) = fixed_values(i);
  return u;
}

}  // namespace wgfem
