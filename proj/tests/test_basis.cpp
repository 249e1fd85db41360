#include "wgfem/basis.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/poly_oracle.hpp"

using namespace wgfem;

namespace {

Eigen::Matrix<double, Eigen::Dynamic, 2> random_ref_points(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::Matrix<double, Eigen::Dynamic, 2> pts(n, 2);
  for (int i = 0; i < n; ++i) {
    double x = uni(rng), y = uni(rng);
    if (x + y > 1.0) {
      x = 1.0 - x;
      y = 1.0 - y;
    }
    pts(i, 0) = x;
    pts(i, 1) = y;
  }
  return pts;
}

const TriGeometry kRefGeo = TriGeometry::from_vertices({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});

}  // namespace

TEST_CASE("Lagrange basis is nodal on the principal lattice") {
  for (int k : {0, 1, 2, 3}) {
    const TriBasis& basis = TriBasis::get(k);
    Eigen::Matrix<double, Eigen::Dynamic, 2> nodes(basis.dim(), 2);
    for (int i = 0; i < basis.dim(); ++i) nodes.row(i) = basis.lattice()[i].transpose();
    const Eigen::MatrixXd vals = basis.eval(nodes);
    CHECK((vals - Eigen::MatrixXd::Identity(basis.dim(), basis.dim())).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("partition of unity and vanishing gradient sum") {
  const auto pts = random_ref_points(20, 42);
  for (int k : {2, 3}) {
    const TriBasis& basis = TriBasis::get(k);
    const Eigen::VectorXd ones = basis.eval(pts, 0, 0).rowwise().sum();
    const Eigen::VectorXd gx = basis.eval(pts, 1, 0).rowwise().sum();
    const Eigen::VectorXd gy = basis.eval(pts, 0, 1).rowwise().sum();
    CHECK((ones.array() - 1.0).abs().maxCoeff() < 1e-13);
    CHECK(gx.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(gy.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("physical derivative tables match the oracle polynomials") {
  // anisotropic element, the regime the affine path must handle
  const TriGeometry geo =
      TriGeometry::from_vertices({0.3, 0.1}, {0.3005, 0.1}, {0.3, 0.35});
  const int k = 3;
  const oracle::Element oe(geo.v0, geo.v1, geo.v2, k);
  const auto pts = random_ref_points(12, 7);
  const BasisTables tab = eval_tri_basis(geo, k, pts, 3);
  for (int j = 0; j < int(oe.basis.size()); ++j) {
    const oracle::Poly2 dx = oe.dphys_x(oe.basis[j]);
    const oracle::Poly2 dy = oe.dphys_y(oe.basis[j]);
    const oracle::Poly2 lap = oe.lap_phys(oe.basis[j]);
    const oracle::Poly2 lap_dx = oe.dphys_x(lap);
    const oracle::Poly2 lap_dy = oe.dphys_y(lap);
    auto close = [](double got, double want, double floor) {
      return std::abs(got - want) <= 1e-9 * (floor + std::abs(want));
    };
    for (int q = 0; q < pts.rows(); ++q) {
      const double x = pts(q, 0), y = pts(q, 1);
      CHECK(close(tab.val(q, j), oe.basis[j].eval(x, y), 1.0));
      CHECK(close(tab.dx(q, j), dx.eval(x, y), 1e4));
      CHECK(close(tab.dy(q, j), dy.eval(x, y), 1e4));
      CHECK(close(tab.lap(q, j), lap.eval(x, y), 1e8));
      CHECK(close(tab.lap_dx(q, j), lap_dx.eval(x, y), 1e12));
      CHECK(close(tab.lap_dy(q, j), lap_dy.eval(x, y), 1e12));
    }
  }
}

TEST_CASE("interpolation reproduces polynomials of degree k") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const TriGeometry geo = TriGeometry::from_vertices({0.2, 0.4}, {0.9, 0.5}, {0.3, 1.1});
  for (int k : {2, 3}) {
    // random polynomial of total degree k
    std::vector<double> coef;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; a + b <= k; ++b) coef.push_back(uni(rng));
    auto f = [&](const Eigen::Vector2d& p) {
      double acc = 0.0;
      int idx = 0;
      for (int a = 0; a <= k; ++a)
        for (int b = 0; a + b <= k; ++b)
          acc += coef[idx++] * std::pow(p.x(), a) * std::pow(p.y(), b);
      return acc;
    };
    const Eigen::VectorXd dofs = lagrange_interpolate_on_tri(f, geo, k);
    const auto pts = random_ref_points(10, 99);
    const BasisTables tab = eval_tri_basis(geo, k, pts, 0);
    for (int q = 0; q < pts.rows(); ++q) {
      const Eigen::Vector2d p = geo.to_physical(pts.row(q).transpose());
      CHECK(tab.val.row(q) * dofs == doctest::Approx(f(p)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("interpolation hits the lattice values exactly") {
  auto f = [](const Eigen::Vector2d& p) { return std::sin(p.x()); };
  const Eigen::VectorXd dofs = lagrange_interpolate_on_tri(f, kRefGeo, 2);
  const TriBasis& basis = TriBasis::get(2);
  for (int i = 0; i < basis.dim(); ++i) {
    const Eigen::Vector2d node = kRefGeo.to_physical(basis.lattice()[i]);
    CHECK(dofs(i) == std::sin(node.x()));  // bitwise: same evaluation path
  }
}

TEST_CASE("interpolation of x^3 at k=2 matches a dense nodal fit") {
  // the interpolant is defined by nodal values; an independent least-squares
  // fit through the same 6 nodes must produce the same polynomial
  auto f = [](const Eigen::Vector2d& p) { return p.x() * p.x() * p.x(); };
  const Eigen::VectorXd dofs = lagrange_interpolate_on_tri(f, kRefGeo, 2);

  const TriBasis& basis = TriBasis::get(2);
  Eigen::MatrixXd vand(6, 6);
  Eigen::VectorXd rhs(6);
  const std::pair<int, int> expo[6] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int r = 0; r < 6; ++r) {
    const Eigen::Vector2d n = basis.lattice()[r];
    for (int c = 0; c < 6; ++c)
      vand(r, c) = std::pow(n.x(), expo[c].first) * std::pow(n.y(), expo[c].second);
    rhs(r) = f(n);
  }
  const Eigen::VectorXd mono = vand.colPivHouseholderQr().solve(rhs);
  auto fit_eval = [&](double x, double y) {
    double acc = 0.0;
    for (int c = 0; c < 6; ++c)
      acc += mono(c) * std::pow(x, expo[c].first) * std::pow(y, expo[c].second);
    return acc;
  };
  const Eigen::Vector2d bary(1.0 / 3.0, 1.0 / 3.0);
  Eigen::Matrix<double, 1, 2> baryrow;
  baryrow << bary.x(), bary.y();
  const BasisTables tab = eval_tri_basis(kRefGeo, 2, baryrow, 0);
  const double interp_at_bary = tab.val.row(0) * dofs;
  CHECK(interp_at_bary == doctest::Approx(fit_eval(bary.x(), bary.y())).epsilon(1e-12));
  // and the interpolation error against x^3 itself is reproduced by the fit
  CHECK(f(bary) - interp_at_bary ==
        doctest::Approx(f(bary) - fit_eval(bary.x(), bary.y())).epsilon(1e-10));
}

TEST_CASE("edge projection: exactness, hand value, idempotence") {
  const Eigen::Vector2d a(0.0, 0.0), b(1.0, 0.0);

  // f in P_d reproduces (here d = 2)
  auto f2 = [](const Eigen::Vector2d& p) { return 3.0 * p.x() * p.x() - p.x() + 0.25; };
  const Eigen::VectorXd c2 = l2_project_on_edge(f2, a, b, 2, 5);
  const EdgeBasis& eb2 = EdgeBasis::get(2);
  Eigen::VectorXd t(5);
  t << 0.1, 0.3, 0.5, 0.7, 0.95;
  const Eigen::MatrixXd vals = eb2.eval(t);
  for (int q = 0; q < t.size(); ++q)
    CHECK(vals.row(q) * c2 ==
          doctest::Approx(f2({t(q), 0.0})).epsilon(1e-12));

  // t^2 onto P_1 of the unit interval: p(t) = t - 1/6 (2x2 normal equations)
  auto fq = [](const Eigen::Vector2d& p) { return p.x() * p.x(); };
  const Eigen::VectorXd c1 = l2_project_on_edge(fq, a, b, 1, 4);
  const EdgeBasis& eb1 = EdgeBasis::get(1);
  const Eigen::MatrixXd v1 = eb1.eval(t);
  for (int q = 0; q < t.size(); ++q)
    CHECK(v1.row(q) * c1 == doctest::Approx(t(q) - 1.0 / 6.0).epsilon(1e-12));

  // constant onto P_0
  auto fone = [](const Eigen::Vector2d&) { return 1.0; };
  const Eigen::VectorXd c0 = l2_project_on_edge(fone, a, b, 0, 3);
  CHECK(c0(0) == doctest::Approx(1.0).epsilon(1e-14));

  // idempotence: projecting the projection is the identity
  auto fproj = [&](const Eigen::Vector2d& p) {
    Eigen::VectorXd tt(1);
    tt << p.x();
    return double(eb1.eval(tt).row(0) * c1);
  };
  const Eigen::VectorXd c1b = l2_project_on_edge(fproj, a, b, 1, 4);
  CHECK((c1b - c1).cwiseAbs().maxCoeff() < 1e-13);
}
