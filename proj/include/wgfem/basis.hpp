#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "wgfem/quadrature.hpp"

namespace wgfem {

/// Affine geometry of a triangle; reference element is {x,y >= 0, x+y <= 1}.
struct TriGeometry {
  Eigen::Vector2d v0, v1, v2;
  Eigen::Matrix2d jac;      // [v1-v0 | v2-v0]
  Eigen::Matrix2d inv_jac;  // jac^{-1}
  double det = 0.0;         // det(jac) = 2 * area, positive for CCW vertices
  double area = 0.0;

  static TriGeometry from_vertices(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c);

  Eigen::Vector2d to_physical(const Eigen::Vector2d& ref) const {
    return v0 + jac * ref;
  }
  Eigen::Vector2d to_reference(const Eigen::Vector2d& phys) const {
    return inv_jac * (phys - v0);
  }
};

/// Lagrange basis of P_k on the principal lattice of the reference triangle.
/// Coefficients are stored in the monomial basis; reference derivatives of any
/// order come from differentiating the monomials.
class TriBasis {
 public:
  explicit TriBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(lattice_.size()); }
  const std::vector<Eigen::Vector2d>& lattice() const { return lattice_; }

  /// Table of d^{ax+ay}/dx^ax dy^ay of every basis function at the given
  /// reference points; (npts x dim).
  Eigen::MatrixXd eval(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts, int ax = 0,
                       int ay = 0) const;

  static const TriBasis& get(int degree);  // cached, degree in [0, 8]

 private:
  int degree_;
  std::vector<std::pair<int, int>> expo_;  // monomial exponents (a, b)
  Eigen::MatrixXd coeff_;                  // (n_mono x dim), column = one basis fn
  std::vector<Eigen::Vector2d> lattice_;
};

/// Lagrange basis of P_d on [0,1] (equispaced nodes; constant for d = 0).
class EdgeBasis {
 public:
  explicit EdgeBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return degree_ + 1; }

  /// (npts x dim) table of the `deriv`-th t-derivative at the given t values.
  Eigen::MatrixXd eval(const Eigen::VectorXd& t, int deriv = 0) const;

  static const EdgeBasis& get(int degree);

 private:
  int degree_;
  Eigen::MatrixXd coeff_;  // (degree+1 x degree+1) monomial coefficients
};

/// Physical-space evaluation tables of the P_k Lagrange basis on an element,
/// at reference points `ref_pts`; every matrix is (npts x dim).
struct BasisTables {
  Eigen::MatrixXd val;
  Eigen::MatrixXd dx, dy;
  Eigen::MatrixXd lap;
  Eigen::MatrixXd lap_dx, lap_dy;
};

/// Builds value/derivative tables through the affine map; `orders` selects how
/// far to fill (0 = values, 1 = +gradient, 2 = +Laplacian, 3 = +grad Laplacian).
BasisTables eval_tri_basis(const TriGeometry& geo, int degree,
                           const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_pts,
                           int orders = 3);

/// Lagrange interpolation I0: coefficients of the unique p in P_k matching f at
/// the principal lattice nodes of the physical triangle.
Eigen::VectorXd lagrange_interpolate_on_tri(
    const std::function<double(const Eigen::Vector2d&)>& f, const TriGeometry& geo, int k);

/// L2 projection onto P_d of the edge from `a` to `b`, parametrized by t in
/// [0,1]; `quad_pts` Gauss points are used for the right-hand side moments.
Eigen::VectorXd l2_project_on_edge(const std::function<double(const Eigen::Vector2d&)>& f,
                                   const Eigen::Vector2d& a, const Eigen::Vector2d& b, int d,
                                   int quad_pts);

}  // namespace wgfem
