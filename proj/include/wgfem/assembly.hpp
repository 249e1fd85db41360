#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "wgfem/mesh.hpp"
#include "wgfem/problems.hpp"
#include "wgfem/weak_ops.hpp"

namespace wgfem {

/// Discretization parameters; -1 means "use the default derived from k".
struct Discretization {
  int k = 2;
  int wgrad_degree = -1;     // weak-gradient target degree l, default k-1
  int quad_tri_degree = -1;  // default 2k+4
  int quad_edge_points = -1; // default k+2

  void validate() const;
  int grad_degree() const { return wgrad_degree < 0 ? k - 1 : wgrad_degree; }
  int tri_degree() const { return quad_tri_degree < 0 ? 2 * k + 4 : quad_tri_degree; }
  int edge_points() const { return quad_edge_points < 0 ? k + 2 : quad_edge_points; }
};

/// Global DOF layout: interior blocks per triangle, then trace blocks per
/// edge, then flux blocks per edge.
struct DofMap {
  int k = 2;
  int n_tri = 0, n_edge = 0;
  int n0 = 0;  // dim P_k per triangle
  Eigen::Index trace_offset = 0, flux_offset = 0, total = 0;
  std::vector<char> boundary_dof;  // 1 for trace/flux DOFs on boundary edges

  Eigen::Index interior_dof(int t, int i) const { return Eigen::Index(t) * n0 + i; }
  Eigen::Index trace_dof(int e, int i) const { return trace_offset + Eigen::Index(e) * (k + 1) + i; }
  Eigen::Index flux_dof(int e, int i) const { return flux_offset + Eigen::Index(e) * k + i; }
  Eigen::Index num_boundary() const;
};

DofMap make_dof_map(const ShishkinMesh& mesh, int k);

/// Coefficient vector over a DofMap layout.
struct WeakFunction {
  Eigen::VectorXd coeffs;

  Eigen::VectorBlock<Eigen::VectorXd> interior(const DofMap& d, int t) {
    return coeffs.segment(d.interior_dof(t, 0), d.n0);
  }
  Eigen::VectorBlock<Eigen::VectorXd> trace(const DofMap& d, int e) {
    return coeffs.segment(d.trace_dof(e, 0), d.k + 1);
  }
  Eigen::VectorBlock<Eigen::VectorXd> flux(const DofMap& d, int e) {
    return coeffs.segment(d.flux_dof(e, 0), d.k);
  }
  static WeakFunction zero(const DofMap& d) {
    return WeakFunction{Eigen::VectorXd::Zero(d.total)};
  }
};

/// Gathers the local DOF vector [interior | trace e0..e2 | flux e0..e2].
Eigen::VectorXd gather_local(const WeakFunction& u, const DofMap& dofs,
                             const ShishkinMesh& mesh, int t);

/// Region-dependent stabilizer weights (rho_T, sigma_T).
std::pair<double, double> stabilizer_parameters(Region region, double epsilon, int n);

/// Element mass matrices: eps^2-weighted P_{k-2} mass, vector mass of the
/// gradient space, and the a-weighted P_k mass.
struct ElementMatrices {
  Eigen::MatrixXd mass_wlap;   // (Nw x Nw)
  Eigen::MatrixXd mass_wgrad;  // (Nd x Nd)
  Eigen::MatrixXd mass_react;  // (N0 x N0)
};

ElementMatrices element_matrices(const ElementContext& ctx, const Discretization& disc,
                                 double epsilon, const std::function<double(double, double)>& a,
                                 const QuadRule& tri_rule);

/// Stabilizer matrix on the local DOF vector:
/// rho <grad u0 . n_e - u_g, grad v0 . n_e - v_g> + sigma <u0 - u_b, v0 - v_b>
/// summed over the three edges.
Eigen::MatrixXd stabilizer_local(const ElementContext& ctx, double rho, double sigma,
                                 const QuadRule& edge_rule);

/// Full local stiffness block matrix with the stabilizer folded in. The weak
/// part (the nine product-formula blocks alone) is kept for verification.
struct LocalStiffness {
  Eigen::MatrixXd mat;        // (n_local x n_local), symmetric PSD
  Eigen::MatrixXd weak_part;  // mat minus the stabilizer contribution
};

LocalStiffness local_stiffness(const ElementContext& ctx, const Discretization& disc,
                               const ProblemSpec& problem);

struct GlobalSystem {
  DofMap dofs;
  Eigen::SparseMatrix<double> full;  // unreduced operator over S_N
  Eigen::VectorXd load;              // (g, psi_0) rows; trace/flux rows zero
  std::vector<Eigen::Index> free_dofs;

  /// Reduced SPD system with essential values eliminated:
  /// A_red x = b[free] - A[free,fixed] * fixed_values.
  std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> reduce(
      const Eigen::VectorXd& fixed_values) const;

  /// Scatters a reduced solution back to a full coefficient vector.
  WeakFunction expand(const Eigen::VectorXd& x_reduced,
                      const Eigen::VectorXd& fixed_values) const;
};

GlobalSystem assemble(const ShishkinMesh& mesh, const Discretization& disc,
                      const ProblemSpec& problem);

}  // namespace wgfem
