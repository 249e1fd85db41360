#pragma once

#include <Eigen/Dense>
#include <array>

#include "wgfem/basis.hpp"
#include "wgfem/mesh.hpp"
#include "wgfem/quadrature.hpp"

namespace wgfem {

/// Immutable per-element data shared by all local computations.
struct ElementContext {
  int tri_index = -1;
  int k = 2;
  int mesh_n = 0;  // elements per axis of the parent mesh
  TriGeometry geo;
  Region region = Region::Omega0;

  struct EdgeSide {
    int global = -1;               // global edge id
    double length = 0.0;
    Eigen::Vector2d a, b;          // endpoints in canonical order (parametrization a -> b)
    Eigen::Vector2d normal_e;      // fixed global edge normal
    Eigen::Vector2d outward;       // outward unit normal of this element
    double sign = 1.0;             // normal_e . outward
  };
  std::array<EdgeSide, 3> edges;

  int n_interior() const { return (k + 1) * (k + 2) / 2; }
  int n_trace() const { return 3 * (k + 1); }
  int n_flux() const { return 3 * k; }
  int n_local() const { return n_interior() + n_trace() + n_flux(); }
};

ElementContext make_context(const ShishkinMesh& mesh, int tri_index, int k);

/// Discrete weak Laplacian into P_{k-2}(T): the rows of each matrix hold the
/// coefficient vectors of the images of the corresponding local basis
/// functions, so that for local DOFs (v0, vb, vg) the image has coefficients
/// from_interior^t v0 + from_trace^t vb + from_flux^t vg.
struct WeakLaplacianOp {
  int target_degree = 0;          // k - 2
  Eigen::MatrixXd from_interior;  // (N0 x Nw)
  Eigen::MatrixXd from_trace;     // (3(k+1) x Nw)
  Eigen::MatrixXd from_flux;      // (3k x Nw)

  Eigen::VectorXd apply(const Eigen::VectorXd& v0, const Eigen::VectorXd& vb,
                        const Eigen::VectorXd& vg) const {
    return from_interior.transpose() * v0 + from_trace.transpose() * vb +
           from_flux.transpose() * vg;
  }
};

WeakLaplacianOp weak_laplacian_op(const ElementContext& ctx, const QuadRule& tri_rule,
                                  const QuadRule& edge_rule);

/// Discrete weak gradient into [P_l(T)]^2 in vector form: the target-space
/// coefficients of the image of (v0, vb) solve
///   gram * c = -div_interior * v0 + trace_normal * vb.
/// The vector basis is (phi_0,0),...,(phi_m,0),(0,phi_0),...,(0,phi_m).
struct WeakGradientOp {
  int target_degree = 0;          // l, default k - 1
  Eigen::MatrixXd gram;           // (Nd x Nd), SPD vector mass
  Eigen::MatrixXd div_interior;   // (Nd x N0)
  Eigen::MatrixXd trace_normal;   // (Nd x Nb)
  Eigen::LLT<Eigen::MatrixXd> gram_llt;

  Eigen::VectorXd apply(const Eigen::VectorXd& v0, const Eigen::VectorXd& vb) const {
    return gram_llt.solve(trace_normal * vb - div_interior * v0);
  }
};

WeakGradientOp weak_gradient_op(const ElementContext& ctx, int target_degree,
                                const QuadRule& tri_rule, const QuadRule& edge_rule);

}  // namespace wgfem
