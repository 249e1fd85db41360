#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "wgfem/assembly.hpp"

namespace wgfem {

/// Addends of the discrete H^2-equivalent norm; every term is the square.
struct ErrorBreakdown {
  double lap_term = 0.0;    // eps^2 ||lap e0||^2 summed over elements
  double grad_term = 0.0;   // ||grad e0||^2
  double react_term = 0.0;  // ||a e0||^2
  double stab_term = 0.0;   // s(e, e)
  double total = 0.0;       // sqrt of the sum
  double energy = std::numeric_limits<double>::quiet_NaN();  // sqrt(a(e,e)) if computed
};

/// I_h u = {I_0 u, I_b u, I_g(grad u . n_e)}: Lagrange interpolation on every
/// element, L2 projections of the trace and the normal flux on every edge.
WeakFunction interpolate(const ProblemSpec& problem, const ShishkinMesh& mesh,
                         const Discretization& disc);

/// Boundary coefficient vector: zero, or trace/flux values of the exact
/// solution on boundary edges when the problem requests inhomogeneous data.
Eigen::VectorXd boundary_values(const ProblemSpec& problem, const ShishkinMesh& mesh,
                                const Discretization& disc);

/// Triple norm of a discrete weak function (typically I_h u - u_N); all
/// integrands are element/edge polynomials.
ErrorBreakdown triple_norm_discrete(const WeakFunction& diff, const ShishkinMesh& mesh,
                                    const Discretization& disc, const ProblemSpec& problem);

/// Triple norm of u - u_N against the analytic exact solution. The stabilizer
/// jumps of the difference coincide with the jumps of u_N itself.
ErrorBreakdown triple_norm_vs_exact(const WeakFunction& uh, const ShishkinMesh& mesh,
                                    const Discretization& disc, const ProblemSpec& problem);

/// sqrt(v^t A_full v) over the unreduced operator; throws if the quadratic
/// form comes out negative (assembly bug).
double energy_norm(const WeakFunction& v, const GlobalSystem& system);

/// order_N = log2(e_N / e_{2N}) for a doubling sequence of (N, e_N) pairs;
/// entry i of the result corresponds to the pair (N_i, N_{i+1}).
std::vector<double> convergence_orders(const std::vector<std::pair<int, double>>& errors);

}  // namespace wgfem
