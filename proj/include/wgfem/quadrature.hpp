#pragma once

#include <Eigen/Dense>

namespace wgfem {

/// Quadrature rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}
/// or on the reference interval [0,1] (points stored in the first column).
struct QuadRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Symmetric positive-weight rule on the reference triangle, exact for all
/// polynomials of total degree <= `degree` (possibly more).
QuadRule tri_quadrature(int degree);

/// Gauss-Legendre rule with `npts` points on [0,1], exact to degree 2*npts-1.
QuadRule edge_quadrature(int npts);

/// Memoized variants; the returned references stay valid for the process.
const QuadRule& tri_rule_cached(int degree);
const QuadRule& edge_rule_cached(int npts);

}  // namespace wgfem
