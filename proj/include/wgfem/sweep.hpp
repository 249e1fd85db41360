#pragma once

#include <string>
#include <vector>

#include "wgfem/norms.hpp"
#include "wgfem/solver.hpp"

namespace wgfem {

struct RunConfig {
  std::string problem = "example1";
  int k = 2;
  std::vector<int> n_values = {4, 8, 16, 32, 64};
  std::vector<double> eps2_values = {1e-6, 1e-10};
  double lambda = -1.0;  // < 0: default k+1
  std::string solver = "cholesky";
  double tol = 1e-10;
  int quad_tri_degree = -1;
  int quad_edge_points = -1;
  int wgrad_degree = -1;          // weak-gradient target degree, default k-1
  std::string boundary = "auto";  // auto | homogeneous | from-exact
  std::string out_dir;            // empty: no files written
  std::vector<std::string> formats = {"table", "csv", "json"};
  int grid = 101;
  bool dump_matrix = false;

  void validate() const;
  double lambda_resolved() const { return lambda < 0.0 ? double(k + 1) : lambda; }
  Discretization discretization() const;
};

struct CellResult {
  double eps2 = 0.0;
  int n = 0;
  double tau = 0.0;
  Eigen::Index dofs_total = 0, dofs_free = 0;
  ErrorBreakdown discrete;  // |||I_h u - u_N|||_M, energy field = |||I_h u - u_N|||
  ErrorBreakdown vs_exact;  // |||u - u_N|||_M
  SolveReport solve;
  double assemble_seconds = 0.0, total_seconds = 0.0;
  bool ok = false;
  std::string message;
};

struct ConvergenceReport {
  RunConfig config;
  std::vector<CellResult> cells;  // eps2-major, n-minor, config order

  std::vector<const CellResult*> row(double eps2) const;
};

/// Full state of one (eps2, N) solve, for exports and tests.
struct CellSolution {
  ShishkinMesh mesh;
  Discretization disc;
  ProblemSpec problem;
  GlobalSystem system;
  WeakFunction uh, ih;
  SolveReport solve;
};

CellSolution solve_cell(const RunConfig& config, double eps2, int n);

/// Runs every (eps2, N) cell, collects errors and orders, writes the
/// requested report files. Solver failures mark their cell and the sweep
/// continues.
ConvergenceReport run_sweep(const RunConfig& config);

/// u_0 sampled on a uniform grid x grid lattice over the unit square; entry
/// (i, j) is the value at (i h, j h). Points on element interfaces evaluate
/// in the lower-triangle/lowest-cell candidate.
Eigen::MatrixXd sample_solution_grid(const CellSolution& cell, int grid);

/// Writes solution_eps2-<v>_N<v>.{csv,vtk} next to the reports, sampled on
/// the plotting grid together with the exact solution when available.
void export_solution(const CellSolution& cell, int grid, const std::string& out_dir,
                     const std::vector<std::string>& formats);

std::string report_table(const ConvergenceReport& report);
std::string report_csv(const ConvergenceReport& report);
std::string report_json(const ConvergenceReport& report);

}  // namespace wgfem
