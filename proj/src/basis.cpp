#include "wgfem/basis.hpp"

#include <cassert>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wgfem {

namespace {

double falling_power(int e, int d, double x) {
  // d-th derivative of x^e: e(e-1)...(e-d+1) x^{e-d}, zero if d > e
  if (d > e) return 0.0;
  double c = 1.0;
  for (int i = 0; i < d; ++i) c *= (e - i);
  double p = 1.0;
  for (int i = 0; i < e - d; ++i) p *= x;
  return c * p;
}

}  // namespace

TriGeometry TriGeometry::from_vertices(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                       const Eigen::Vector2d& c) {
  TriGeometry g;
  g.v0 = a;
  g.v1 = b;
  g.v2 = c;
  g.jac.col(0) = b - a;
  g.jac.col(1) = c - a;
  g.det = g.jac.determinant();
  if (g.det <= 0.0) throw std::invalid_argument("TriGeometry: vertices must be CCW");
  g.inv_jac = g.jac.inverse();
  g.area = 0.5 * g.det;
  return g;
}

TriBasis::TriBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("TriBasis: degree must be >= 0");
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) expo_.emplace_back(a, d - a);
  if (degree == 0) {
    lattice_.emplace_back(1.0 / 3.0, 1.0 / 3.0);
  } else {
    for (int j = 0; j <= degree; ++j)
      for (int i = 0; i + j <= degree; ++i)
        lattice_.emplace_back(double(i) / degree, double(j) / degree);
  }
  const int n = dim();
  Eigen::MatrixXd vand(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      vand(r, c) = falling_power(expo_[c].first, 0, lattice_[r].x()) *
                   falling_power(expo_[c].second, 0, lattice_[r].y());
  // column j of coeff_ = monomial coefficients of the basis dual to node j
  coeff_ = vand.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

Eigen::MatrixXd TriBasis::eval(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts, int ax,
                               int ay) const {
  const int npts = static_cast<int>(pts.rows());
  const int n = dim();
  Eigen::MatrixXd mono(npts, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < npts; ++r)
      mono(r, c) = falling_power(expo_[c].first, ax, pts(r, 0)) *
                   falling_power(expo_[c].second, ay, pts(r, 1));
  return mono * coeff_;
}

const TriBasis& TriBasis::get(int degree) {
  static std::mutex mtx;
  static std::map<int, TriBasis> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, TriBasis(degree)).first;
  return it->second;
}

EdgeBasis::EdgeBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("EdgeBasis: degree must be >= 0");
  const int n = degree + 1;
  Eigen::MatrixXd vand(n, n);
  for (int r = 0; r < n; ++r) {
    const double t = (degree == 0) ? 0.5 : double(r) / degree;
    for (int c = 0; c < n; ++c) vand(r, c) = falling_power(c, 0, t);
  }
  coeff_ = vand.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

Eigen::MatrixXd EdgeBasis::eval(const Eigen::VectorXd& t, int deriv) const {
  const int npts = static_cast<int>(t.size());
  const int n = dim();
  Eigen::MatrixXd mono(npts, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < npts; ++r) mono(r, c) = falling_power(c, deriv, t(r));
  return mono * coeff_;
}

const EdgeBasis& EdgeBasis::get(int degree) {
  static std::mutex mtx;
  static std::map<int, EdgeBasis> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, EdgeBasis(degree)).first;
  return it->second;
}

BasisTables eval_tri_basis(const TriGeometry& geo, int degree,
                           const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_pts,
                           int orders) {
  const TriBasis& basis = TriBasis::get(degree);
  const Eigen::Matrix2d& ij = geo.inv_jac;
  // metric of the affine map: G = J^{-1} J^{-T}
  const Eigen::Matrix2d metric = ij * ij.transpose();

  BasisTables tab;
  tab.val = basis.eval(ref_pts, 0, 0);
  if (orders >= 1) {
    const Eigen::MatrixXd d10 = basis.eval(ref_pts, 1, 0);
    const Eigen::MatrixXd d01 = basis.eval(ref_pts, 0, 1);
    tab.dx = d10 * ij(0, 0) + d01 * ij(1, 0);
    tab.dy = d10 * ij(0, 1) + d01 * ij(1, 1);
  }
  if (orders >= 2) {
    const Eigen::MatrixXd d20 = basis.eval(ref_pts, 2, 0);
    const Eigen::MatrixXd d11 = basis.eval(ref_pts, 1, 1);
    const Eigen::MatrixXd d02 = basis.eval(ref_pts, 0, 2);
    tab.lap = metric(0, 0) * d20 + 2.0 * metric(0, 1) * d11 + metric(1, 1) * d02;
  }
  if (orders >= 3) {
    const Eigen::MatrixXd d30 = basis.eval(ref_pts, 3, 0);
    const Eigen::MatrixXd d21 = basis.eval(ref_pts, 2, 1);
    const Eigen::MatrixXd d12 = basis.eval(ref_pts, 1, 2);
    const Eigen::MatrixXd d03 = basis.eval(ref_pts, 0, 3);
    const Eigen::MatrixXd lap_dref0 =
        metric(0, 0) * d30 + 2.0 * metric(0, 1) * d21 + metric(1, 1) * d12;
    const Eigen::MatrixXd lap_dref1 =
        metric(0, 0) * d21 + 2.0 * metric(0, 1) * d12 + metric(1, 1) * d03;
    tab.lap_dx = lap_dref0 * ij(0, 0) + lap_dref1 * ij(1, 0);
    tab.lap_dy = lap_dref0 * ij(0, 1) + lap_dref1 * ij(1, 1);
  }
  return tab;
}

Eigen::VectorXd lagrange_interpolate_on_tri(
    const std::function<double(const Eigen::Vector2d&)>& f, const TriGeometry& geo, int k) {
  const TriBasis& basis = TriBasis::get(k);
  Eigen::VectorXd coeffs(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) coeffs(i) = f(geo.to_physical(basis.lattice()[i]));
  return coeffs;
}

Eigen::VectorXd l2_project_on_edge(const std::function<double(const Eigen::Vector2d&)>& f,
                                   const Eigen::Vector2d& a, const Eigen::Vector2d& b, int d,
                                   int quad_pts) {
  const EdgeBasis& basis = EdgeBasis::get(d);
  const QuadRule rule = edge_quadrature(std::max(quad_pts, d + 1));
  const Eigen::VectorXd t = rule.points.col(0);
  const Eigen::MatrixXd vals = basis.eval(t);
  // the (constant) arclength factor cancels between mass matrix and moments
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
  for (int q = 0; q < rule.size(); ++q) {
    const Eigen::Vector2d p = a + t(q) * (b - a);
    const double fq = f(p);
    for (int i = 0; i < basis.dim(); ++i) {
      rhs(i) += rule.weights(q) * fq * vals(q, i);
      for (int j = 0; j < basis.dim(); ++j)
        mass(i, j) += rule.weights(q) * vals(q, i) * vals(q, j);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  assert(llt.info() == Eigen::Success && "edge mass matrix must be SPD");
  return llt.solve(rhs);
}

}  // namespace wgfem
