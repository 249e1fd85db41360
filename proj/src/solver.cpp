#include "wgfem/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace wgfem {

namespace {

double rel_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& b) {
  const double nb = b.norm();
  if (nb == 0.0) return (a * x - b).norm();
  return (a * x - b).norm() / nb;
}

}  // namespace

std::pair<Eigen::VectorXd, SolveReport> solve(const Eigen::SparseMatrix<double>& a,
                                              const Eigen::VectorXd& b,
                                              const SolveOptions& opts) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("solve: dimension mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  Eigen::VectorXd x;

  if (opts.method == "cholesky") {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(a);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("solve: sparse LDL^T factorization failed (matrix not SPD?)");
    const double min_pivot = ldlt.vectorD().minCoeff();
    if (min_pivot <= 0.0)
      throw std::runtime_error("solve: indefinite factor, smallest pivot " +
                               std::to_string(min_pivot));
    x = ldlt.solve(b);
    report.method = "cholesky";
    report.min_pivot = min_pivot;
    report.rel_residual = rel_residual(a, x, b);
    for (int r = 0; r < opts.max_refinements && report.rel_residual > opts.tol; ++r) {
      const Eigen::VectorXd corr = ldlt.solve(b - a * x);
      x += corr;
      report.rel_residual = rel_residual(a, x, b);
      report.iterations = r + 1;
    }
  } else if (opts.method == "cg") {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(opts.tol);
    cg.setMaxIterations(static_cast<Eigen::Index>(50.0 * std::sqrt(double(a.rows()))) + 10);
    cg.compute(a);
    x = cg.solve(b);
    report.method = "cg";
    report.iterations = static_cast<int>(cg.iterations());
    report.rel_residual = rel_residual(a, x, b);
    if (cg.info() != Eigen::Success && report.rel_residual > opts.tol)
      throw std::runtime_error("solve: CG did not reach tolerance, residual " +
                               std::to_string(report.rel_residual));
  } else {
    throw std::invalid_argument("solve: unknown method '" + opts.method + "'");
  }

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(x), report};
}

}  // namespace wgfem
