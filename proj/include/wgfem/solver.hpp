#pragma once

#include <Eigen/Sparse>
#include <string>
#include <utility>

namespace wgfem {

struct SolveReport {
  std::string method;
  int iterations = 0;        // 0 for the direct path
  double rel_residual = 0.0; // ||Ax - b||_2 / ||b||_2 (0 when b = 0)
  double seconds = 0.0;
  double min_pivot = 0.0;    // smallest diagonal of the LDL^T factor (direct path)
};

struct SolveOptions {
  std::string method = "cholesky";  // "cholesky" or "cg"
  double tol = 1e-10;
  int max_refinements = 5;  // iterative refinement sweeps for the direct path
};

/// Solves the SPD system A x = b. The direct path is sparse LDL^T with AMD
/// ordering plus iterative refinement; breakdown or an indefinite factor falls
/// through to a diagnostic failure. "cg" runs Jacobi-preconditioned conjugate
/// gradients with an iteration cap of 50 sqrt(n).
std::pair<Eigen::VectorXd, SolveReport> solve(const Eigen::SparseMatrix<double>& a,
                                              const Eigen::VectorXd& b,
                                              const SolveOptions& opts = {});

}  // namespace wgfem
