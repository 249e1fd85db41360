#include "wgfem/weak_ops.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/poly_oracle.hpp"
#include "support/wg_oracle.hpp"
#include "wgfem/mesh.hpp"

using namespace wgfem;

namespace {

// lift of a physical-coordinate polynomial into the local weak DOFs:
// interior Lagrange values, edge-trace values, edge-flux values of grad p . n_e
struct Lift {
  Eigen::VectorXd v0, vb, vg;
};

Lift lift_polynomial(const ElementContext& ctx, const oracle::Poly2& p) {
  const int k = ctx.k;
  const TriBasis& ib = TriBasis::get(k);
  Lift lift;
  lift.v0.resize(ib.dim());
  for (int i = 0; i < ib.dim(); ++i) {
    const Eigen::Vector2d node = ctx.geo.to_physical(ib.lattice()[i]);
    lift.v0(i) = p.eval(node.x(), node.y());
  }
  const oracle::Poly2 px = p.dx(), py = p.dy();
  lift.vb.resize(3 * (k + 1));
  lift.vg.resize(3 * k);
  for (int le = 0; le < 3; ++le) {
    const auto& side = ctx.edges[le];
    for (int r = 0; r <= k; ++r) {
      const double t = double(r) / k;
      const Eigen::Vector2d pt = side.a + t * (side.b - side.a);
      lift.vb(le * (k + 1) + r) = p.eval(pt.x(), pt.y());
    }
    for (int r = 0; r < k; ++r) {
      const double t = (k == 1) ? 0.5 : double(r) / (k - 1);
      const Eigen::Vector2d pt = side.a + t * (side.b - side.a);
      lift.vg(le * k + r) = px.eval(pt.x(), pt.y()) * side.normal_e.x() +
                            py.eval(pt.x(), pt.y()) * side.normal_e.y();
    }
  }
  return lift;
}

oracle::Poly2 random_poly(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  oracle::Poly2 p(k);
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b) p.at(a, b) = uni(rng);
  return p;
}

std::vector<int> spread_indices(const ShishkinMesh& mesh, int count) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i)
    out.push_back((i * mesh.num_triangles()) / count + i % 2);
  for (int& t : out) t = std::min(t, mesh.num_triangles() - 1);
  return out;
}

}  // namespace

namespace {

void check_reproduction(const ShishkinMesh& mesh, int k, int trials, double tol,
                        unsigned seed) {
  std::mt19937_64 rng(seed);
  const QuadRule& tri_rule = tri_rule_cached(2 * k + 4);
  const QuadRule& edge_rule = edge_rule_cached(k + 2);
  const TriBasis& mb = TriBasis::get(k - 2);
  const TriBasis& lb = TriBasis::get(k - 1);
  for (int t : spread_indices(mesh, 20)) {
    const ElementContext ctx = make_context(mesh, t, k);
    const WeakLaplacianOp wlap = weak_laplacian_op(ctx, tri_rule, edge_rule);
    const WeakGradientOp wgrad = weak_gradient_op(ctx, k - 1, tri_rule, edge_rule);
    for (int trial = 0; trial < trials; ++trial) {
      const oracle::Poly2 p = random_poly(k, rng);
      const Lift lift = lift_polynomial(ctx, p);

      // expected: Lagrange coefficients of lap p in P_{k-2}
      const oracle::Poly2 lap = p.dx().dx() + p.dy().dy();
      const Eigen::VectorXd got_lap = wlap.apply(lift.v0, lift.vb, lift.vg);
      for (int i = 0; i < mb.dim(); ++i) {
        const Eigen::Vector2d node = ctx.geo.to_physical(mb.lattice()[i]);
        CHECK(std::abs(got_lap(i) - lap.eval(node.x(), node.y())) <= tol);
      }

      const oracle::Poly2 px = p.dx(), py = p.dy();
      const Eigen::VectorXd got_grad = wgrad.apply(lift.v0, lift.vb);
      for (int i = 0; i < lb.dim(); ++i) {
        const Eigen::Vector2d node = ctx.geo.to_physical(lb.lattice()[i]);
        CHECK(std::abs(got_grad(i) - px.eval(node.x(), node.y())) <= tol);
        CHECK(std::abs(got_grad(lb.dim() + i) - py.eval(node.x(), node.y())) <= tol);
      }
    }
  }
}

}  // namespace

TEST_CASE("weak operators reproduce polynomial derivatives") {
  // layered mesh with moderate aspect ratio: the identity is exact, so the
  // coefficients match to rounding
  const ShishkinMesh mesh = build_mesh({8, 0.02, 3.0});
  for (int k : {2, 3}) check_reproduction(mesh, k, 50, 1e-11, 1234);
}

TEST_CASE("weak operators stay accurate on extreme layer elements") {
  // aspect ratios near 1e2 and edge/area cancellation leave a few digits on
  // the table; the bound here documents the attainable scale
  const ShishkinMesh mesh = build_mesh({8, 1e-3, 3.0});
  for (int k : {2, 3}) check_reproduction(mesh, k, 10, 1e-7, 4321);
}

TEST_CASE("weak Laplacian spot checks") {
  const ShishkinMesh mesh = build_mesh({4, 0.9, 3.0});  // uniform
  const int t = 0;
  const QuadRule& tri_rule = tri_rule_cached(8);
  const QuadRule& edge_rule = edge_rule_cached(4);

  // lift of x^2 + y^2, k = 2: weak Laplacian is the constant 4
  {
    const ElementContext ctx = make_context(mesh, t, 2);
    const WeakLaplacianOp op = weak_laplacian_op(ctx, tri_rule, edge_rule);
    oracle::Poly2 p(2);
    p.at(2, 0) = 1.0;
    p.at(0, 2) = 1.0;
    const Lift lift = lift_polynomial(ctx, p);
    const Eigen::VectorXd img = op.apply(lift.v0, lift.vb, lift.vg);
    CHECK(img.size() == 1);
    CHECK(img(0) == doctest::Approx(4.0).epsilon(1e-12));
  }
  // lift of x, any k: weak Laplacian vanishes
  for (int k : {2, 3}) {
    const ElementContext ctx = make_context(mesh, t, k);
    const WeakLaplacianOp op = weak_laplacian_op(ctx, tri_rule, edge_rule);
    const oracle::Poly2 p = oracle::Poly2::mono(1, 0, 1.0);
    const Lift lift = lift_polynomial(ctx, p);
    CHECK(op.apply(lift.v0, lift.vb, lift.vg).cwiseAbs().maxCoeff() < 1e-12);
  }
  // v_g = 1 on one edge only, k = 2: the image is sign * |e| / |T|
  {
    const ElementContext ctx = make_context(mesh, t, 2);
    const WeakLaplacianOp op = weak_laplacian_op(ctx, tri_rule, edge_rule);
    for (int le = 0; le < 3; ++le) {
      Eigen::VectorXd v0 = Eigen::VectorXd::Zero(ctx.n_interior());
      Eigen::VectorXd vb = Eigen::VectorXd::Zero(ctx.n_trace());
      Eigen::VectorXd vg = Eigen::VectorXd::Zero(ctx.n_flux());
      vg.segment(le * 2, 2).setOnes();
      const auto& side = ctx.edges[le];
      const double want = side.sign * side.length / ctx.geo.area;
      CHECK(op.apply(v0, vb, vg)(0) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("weak gradient spot checks") {
  const ShishkinMesh mesh = build_mesh({4, 0.9, 3.0});
  const QuadRule& tri_rule = tri_rule_cached(8);
  const QuadRule& edge_rule = edge_rule_cached(4);
  const ElementContext ctx = make_context(mesh, 5, 2);
  const WeakGradientOp op = weak_gradient_op(ctx, 1, tri_rule, edge_rule);
  const TriBasis& lb = TriBasis::get(1);

  // lift of x: gradient (1, 0)
  {
    const Lift lift = lift_polynomial(ctx, oracle::Poly2::mono(1, 0, 1.0));
    const Eigen::VectorXd g = op.apply(lift.v0, lift.vb);
    for (int i = 0; i < lb.dim(); ++i) {
      CHECK(g(i) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(g(lb.dim() + i) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
  }
  // lift of xy: gradient (y, x)
  {
    const Lift lift = lift_polynomial(ctx, oracle::Poly2::mono(1, 1, 1.0));
    const Eigen::VectorXd g = op.apply(lift.v0, lift.vb);
    for (int i = 0; i < lb.dim(); ++i) {
      const Eigen::Vector2d node = ctx.geo.to_physical(lb.lattice()[i]);
      CHECK(g(i) == doctest::Approx(node.y()).epsilon(1e-12));
      CHECK(g(lb.dim() + i) == doctest::Approx(node.x()).epsilon(1e-12));
    }
  }
  // v0 = 1, vb = 0: coefficients are -gram^{-1} div_interior against the
  // constant-one interior vector; matches a dense independent solve
  {
    Eigen::VectorXd v0 = Eigen::VectorXd::Ones(ctx.n_interior());
    Eigen::VectorXd vb = Eigen::VectorXd::Zero(ctx.n_trace());
    const Eigen::VectorXd got = op.apply(v0, vb);
    const oracle::LocalSetup setup(ctx);
    const auto images = oracle::weak_gradient_images(setup, 1);
    // sum the interior images (flux block does not contribute)
    oracle::Poly2 gx(1), gy(1);
    for (int i = 0; i < setup.n0(); ++i) {
      gx = gx + images[i].first;
      gy = gy + images[i].second;
    }
    for (int i = 0; i < lb.dim(); ++i) {
      const Eigen::Vector2d ref_node = lb.lattice()[i];
      CHECK(got(i) == doctest::Approx(gx.eval(ref_node.x(), ref_node.y())).epsilon(1e-10));
      CHECK(got(lb.dim() + i) ==
            doctest::Approx(gy.eval(ref_node.x(), ref_node.y())).epsilon(1e-10));
    }
  }
}

TEST_CASE("weak operator defining identities against the dense oracle") {
  const ShishkinMesh mesh = build_mesh({8, 1e-2, 3.0});
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int k : {2, 3}) {
    const QuadRule& tri_rule = tri_rule_cached(2 * k + 4);
    const QuadRule& edge_rule = edge_rule_cached(k + 2);
    for (int t : {3, 40, 77, 120}) {
      const ElementContext ctx = make_context(mesh, t, k);
      const oracle::LocalSetup setup(ctx);
      const WeakLaplacianOp wlap = weak_laplacian_op(ctx, tri_rule, edge_rule);

      Eigen::VectorXd v0(ctx.n_interior()), vb(ctx.n_trace()), vg(ctx.n_flux());
      for (int i = 0; i < v0.size(); ++i) v0(i) = uni(rng);
      for (int i = 0; i < vb.size(); ++i) vb(i) = uni(rng);
      for (int i = 0; i < vg.size(); ++i) vg(i) = uni(rng);

      // library image as a reference-coordinate polynomial
      const Eigen::VectorXd c = wlap.apply(v0, vb, vg);
      const oracle::Element elem_m(ctx.geo.v0, ctx.geo.v1, ctx.geo.v2, k - 2);
      oracle::Poly2 image(k - 2);
      for (int i = 0; i < c.size(); ++i) image = image + elem_m.basis[i].scaled(c(i));

      for (const auto& psi : oracle::monomials(k - 2)) {
        // (lap_w v, psi)_T
        const double lhs = setup.elem.integrate(image * psi);
        // (v0, lap psi)_T - <v_b, grad psi . n> + <v_g sign, psi>
        double rhs = 0.0;
        oracle::Poly2 v0p(k);
        for (int i = 0; i < setup.n0(); ++i) v0p = v0p + setup.elem.basis[i].scaled(v0(i));
        rhs += setup.elem.integrate(v0p * setup.elem.lap_phys(psi));
        for (int le = 0; le < 3; ++le) {
          const auto& side = ctx.edges[le];
          oracle::Poly1 vbp, vgp;
          for (int r = 0; r <= k; ++r)
            vbp = vbp + setup.trace_basis[r].scaled(vb(le * (k + 1) + r));
          for (int r = 0; r < k; ++r)
            vgp = vgp + setup.flux_basis[r].scaled(vg(le * k + r));
          const oracle::Poly2 grad_n =
              setup.elem.dphys_x(psi).scaled(side.outward.x()) +
              setup.elem.dphys_y(psi).scaled(side.outward.y());
          rhs -= side.length * (vbp * setup.restrict_to_edge(grad_n, le)).integral01();
          rhs += side.sign * side.length *
                 (vgp * setup.restrict_to_edge(psi, le)).integral01();
        }
        CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("linearity and edge-normal sign consistency") {
  const ShishkinMesh mesh = build_mesh({8, 1e-2, 3.0});
  const int k = 2;
  const QuadRule& tri_rule = tri_rule_cached(2 * k + 4);
  const QuadRule& edge_rule = edge_rule_cached(k + 2);
  const ElementContext ctx = make_context(mesh, 33, k);
  const WeakLaplacianOp op = weak_laplacian_op(ctx, tri_rule, edge_rule);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v0(ctx.n_interior()), vb(ctx.n_trace()), vg(ctx.n_flux());
  Eigen::VectorXd w0(ctx.n_interior()), wb(ctx.n_trace()), wg(ctx.n_flux());
  for (int i = 0; i < v0.size(); ++i) {
    v0(i) = uni(rng);
    w0(i) = uni(rng);
  }
  for (int i = 0; i < vb.size(); ++i) {
    vb(i) = uni(rng);
    wb(i) = uni(rng);
  }
  for (int i = 0; i < vg.size(); ++i) {
    vg(i) = uni(rng);
    wg(i) = uni(rng);
  }
  const double alpha = 0.37, beta = -1.64;
  const Eigen::VectorXd combo =
      op.apply(alpha * v0 + beta * w0, alpha * vb + beta * wb, alpha * vg + beta * wg);
  const Eigen::VectorXd parts =
      alpha * op.apply(v0, vb, vg) + beta * op.apply(w0, wb, wg);
  CHECK((combo - parts).cwiseAbs().maxCoeff() < 1e-12);

  // flipping n_e on one edge and negating that edge's flux coefficients
  // leaves the image unchanged: u_g n_e is the invariant object
  for (int le = 0; le < 3; ++le) {
    ElementContext flipped = ctx;
    flipped.edges[le].normal_e = -ctx.edges[le].normal_e;
    flipped.edges[le].sign = -ctx.edges[le].sign;
    const WeakLaplacianOp op2 = weak_laplacian_op(flipped, tri_rule, edge_rule);
    Eigen::VectorXd vg2 = vg;
    vg2.segment(le * k, k) *= -1.0;
    CHECK((op.apply(v0, vb, vg) - op2.apply(v0, vb, vg2)).cwiseAbs().maxCoeff() < 1e-12);
  }
}
