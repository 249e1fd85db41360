#include "wgfem/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>

#include "json.hpp"
#include "wgfem/io.hpp"

namespace wgfem {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v, const char* spec = "%.12e") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string eps2_label(double eps2) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", eps2);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  discretization().validate();
  if (n_values.empty()) throw std::invalid_argument("RunConfig: empty N list");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 4 || n_values[i] % 4 != 0)
      throw std::invalid_argument("RunConfig: N entries must be multiples of 4");
    if (i > 0 && n_values[i] != 2 * n_values[i - 1])
      throw std::invalid_argument("RunConfig: N list must double");
  }
  if (eps2_values.empty()) throw std::invalid_argument("RunConfig: empty eps2 list");
  for (double e : eps2_values)
    if (!(e > 0.0) || !(e < 1.0))
      throw std::invalid_argument("RunConfig: eps2 must lie in (0,1)");
  if (solver != "cholesky" && solver != "cg")
    throw std::invalid_argument("RunConfig: solver must be cholesky or cg");
  if (boundary != "auto" && boundary != "homogeneous" && boundary != "from-exact")
    throw std::invalid_argument("RunConfig: unknown boundary mode");
  const std::set<std::string> known{"csv", "json", "vtk", "table"};
  for (const auto& f : formats)
    if (!known.count(f)) throw std::invalid_argument("RunConfig: unknown format " + f);
  if (grid < 2) throw std::invalid_argument("RunConfig: grid must be >= 2");
}

Discretization RunConfig::discretization() const {
  Discretization d;
  d.k = k;
  d.wgrad_degree = wgrad_degree;
  d.quad_tri_degree = quad_tri_degree;
  d.quad_edge_points = quad_edge_points;
  return d;
}

std::vector<const CellResult*> ConvergenceReport::row(double eps2) const {
  std::vector<const CellResult*> out;
  for (const auto& c : cells)
    if (c.eps2 == eps2) out.push_back(&c);
  return out;
}

CellSolution solve_cell(const RunConfig& config, double eps2, int n) {
  const double eps = std::sqrt(eps2);
  CellSolution cell;
  cell.disc = config.discretization();
  cell.problem = make_problem(config.problem, eps);
  if (config.boundary == "homogeneous")
    cell.problem.boundary = BoundaryMode::HomogeneousClamped;
  else if (config.boundary == "from-exact")
    cell.problem.boundary = BoundaryMode::FromExact;
  cell.mesh = build_mesh({n, eps, config.lambda_resolved()});
  cell.system = assemble(cell.mesh, cell.disc, cell.problem);

  const Eigen::VectorXd bvals = boundary_values(cell.problem, cell.mesh, cell.disc);
  const auto [a_red, b_red] = cell.system.reduce(bvals);
  SolveOptions opts;
  opts.method = config.solver;
  opts.tol = config.tol;
  auto [x, report] = solve(a_red, b_red, opts);
  cell.solve = report;
  cell.uh = cell.system.expand(x, bvals);
  if (cell.problem.exact.has_value())
    cell.ih = interpolate(cell.problem, cell.mesh, cell.disc);
  return cell;
}

ConvergenceReport run_sweep(const RunConfig& config) {
  config.validate();
  ConvergenceReport report;
  report.config = config;

  for (const double eps2 : config.eps2_values) {
    for (const int n : config.n_values) {
      CellResult res;
      res.eps2 = eps2;
      res.n = n;
      const double t0 = now_seconds();
      try {
        const CellSolution cell = solve_cell(config, eps2, n);
        res.tau = cell.mesh.tau;
        res.dofs_total = cell.system.dofs.total;
        res.dofs_free = Eigen::Index(cell.system.free_dofs.size());
        res.solve = cell.solve;

        WeakFunction diff{cell.ih.coeffs - cell.uh.coeffs};
        res.discrete = triple_norm_discrete(diff, cell.mesh, cell.disc, cell.problem);
        res.discrete.energy = energy_norm(diff, cell.system);
        res.vs_exact = triple_norm_vs_exact(cell.uh, cell.mesh, cell.disc, cell.problem);
        res.ok = true;

        // severe-conditioning diagnostic: sigma_T h beyond double headroom
        double worst = 0.0;
        for (const auto& tri : cell.mesh.triangles) {
          const double sigma =
              stabilizer_parameters(tri.region, cell.problem.epsilon, n).second;
          worst = std::max(worst, sigma * std::max(tri.hx, tri.hy));
        }
        if (worst > 1e12) {
          res.message = "conditioning: max sigma_T*h = " + fmt(worst, "%.3e");
          std::cerr << "[wgfem] eps2=" << eps2_label(eps2) << " N=" << n << " "
                    << res.message << "\n";
        }

        if (!config.out_dir.empty()) {
          const bool want_vtk =
              std::count(config.formats.begin(), config.formats.end(), "vtk") > 0;
          const bool want_csv =
              std::count(config.formats.begin(), config.formats.end(), "csv") > 0;
          if (want_vtk || want_csv) {
            std::vector<std::string> fmts;
            if (want_csv) fmts.push_back("csv");
            if (want_vtk) fmts.push_back("vtk");
            export_solution(cell, config.grid, config.out_dir, fmts);
          }
          if (config.dump_matrix) {
            const auto [a_red, b_red] =
                cell.system.reduce(boundary_values(cell.problem, cell.mesh, cell.disc));
            write_text_atomic(std::filesystem::path(config.out_dir) /
                                  ("matrix_eps2-" + eps2_label(eps2) + "_N" +
                                   std::to_string(n) + ".mtx"),
                              matrix_market(a_red));
          }
        }
      } catch (const std::exception& e) {
        res.ok = false;
        res.message = e.what();
        std::cerr << "[wgfem] cell eps2=" << eps2_label(eps2) << " N=" << n
                  << " failed: " << e.what() << "\n";
      }
      res.total_seconds = now_seconds() - t0;
      report.cells.push_back(res);
    }
  }

  if (!config.out_dir.empty()) {
    const std::filesystem::path dir(config.out_dir);
    for (const auto& f : config.formats) {
      if (f == "table") write_text_atomic(dir / "table.txt", report_table(report));
      if (f == "csv") write_text_atomic(dir / "report.csv", report_csv(report));
      if (f == "json") write_text_atomic(dir / "report.json", report_json(report));
    }
  }
  return report;
}

Eigen::MatrixXd sample_solution_grid(const CellSolution& cell, int grid) {
  const ShishkinMesh& mesh = cell.mesh;
  const int n = mesh.params.n;
  const DofMap dofs = cell.system.dofs;
  Eigen::MatrixXd out(grid, grid);
  const double h = 1.0 / (grid - 1);

  auto locate = [&](const std::vector<double>& pts, double v) {
    // cell index in [1, n] with pts[i-1] <= v <= pts[i]
    int lo = int(std::upper_bound(pts.begin(), pts.end(), v) - pts.begin());
    return std::clamp(lo, 1, n);
  };

  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const double x = i * h, y = j * h;
      const int ci = locate(mesh.x, x);
      const int cj = locate(mesh.y, y);
      const double fx = (x - mesh.x[ci - 1]) / (mesh.x[ci] - mesh.x[ci - 1]);
      const double fy = (y - mesh.y[cj - 1]) / (mesh.y[cj] - mesh.y[cj - 1]);
      const bool lower = (fx + fy <= 1.0);
      const int t = 2 * ((cj - 1) * n + (ci - 1)) + (lower ? 0 : 1);
      const ElementContext ctx = make_context(mesh, t, dofs.k);
      Eigen::Matrix<double, 1, 2> ref;
      ref = ctx.geo.to_reference({x, y}).transpose();
      const BasisTables bt = eval_tri_basis(ctx.geo, dofs.k, ref, 0);
      out(i, j) =
          bt.val.row(0).dot(cell.uh.coeffs.segment(dofs.interior_dof(t, 0), dofs.n0));
    }
  }
  return out;
}

void export_solution(const CellSolution& cell, int grid, const std::string& out_dir,
                     const std::vector<std::string>& formats) {
  const Eigen::MatrixXd values = sample_solution_grid(cell, grid);
  Eigen::MatrixXd exact;
  const Eigen::MatrixXd* exact_ptr = nullptr;
  if (cell.problem.exact.has_value()) {
    exact.resize(grid, grid);
    const double h = 1.0 / (grid - 1);
    for (int j = 0; j < grid; ++j)
      for (int i = 0; i < grid; ++i)
        exact(i, j) = cell.problem.exact->value(i * h, j * h);
    exact_ptr = &exact;
  }
  const std::string stem = "solution_eps2-" +
                           eps2_label(cell.problem.epsilon * cell.problem.epsilon) + "_N" +
                           std::to_string(cell.mesh.params.n);
  const std::filesystem::path dir(out_dir);
  for (const auto& f : formats) {
    if (f == "csv") write_text_atomic(dir / (stem + ".csv"), grid_csv(values, exact_ptr, grid));
    if (f == "vtk") write_text_atomic(dir / (stem + ".vtk"), grid_vtk(values, exact_ptr, grid));
  }
}

namespace {

enum class NormMode { Discrete, VsExact, Energy };

std::vector<double> mode_orders(const std::vector<const CellResult*>& row, NormMode mode) {
  std::vector<std::pair<int, double>> seq;
  for (const auto* c : row) {
    if (!c->ok) break;
    const double e = mode == NormMode::Discrete   ? c->discrete.total
                     : mode == NormMode::VsExact ? c->vs_exact.total
                                                 : c->discrete.energy;
    seq.emplace_back(c->n, e);
  }
  if (seq.size() < 2) return {};
  for (const auto& [n, e] : seq)
    if (!(e > 0.0)) return {};
  return convergence_orders(seq);
}

}  // namespace

std::string report_table(const ConvergenceReport& report) {
  const RunConfig& cfg = report.config;
  std::string out;
  out += "# problem=" + cfg.problem + " k=" + std::to_string(cfg.k) +
         " lambda=" + fmt(cfg.lambda_resolved(), "%g") + " solver=" + cfg.solver + "\n";
  struct Mode {
    const char* name;
    bool vs_exact;
  };
  for (const Mode mode : {Mode{"|||I_h u - u_N|||_M", false}, Mode{"|||u - u_N|||_M", true}}) {
    out += "\n## error norm: ";
    out += mode.name;
    out += "\n      N";
    for (double eps2 : cfg.eps2_values)
      out += "  eps2=" + eps2_label(eps2) +
             std::string(std::max(0, 18 - int(eps2_label(eps2).size()) - 5), ' ') + "   order ";
    out += "\n";
    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
      char head[16];
      std::snprintf(head, sizeof(head), "%7d", cfg.n_values[ni]);
      out += head;
      for (double eps2 : cfg.eps2_values) {
        const auto row = report.row(eps2);
        const auto orders = mode_orders(row, mode.vs_exact ? NormMode::VsExact : NormMode::Discrete);
        if (ni < row.size() && row[ni]->ok) {
          const ErrorBreakdown& b = mode.vs_exact ? row[ni]->vs_exact : row[ni]->discrete;
          out += "  " + fmt(b.total, "%.6e");
          if (ni >= 1 && ni - 1 < orders.size())
            out += "   " + fmt(orders[ni - 1], "%6.3f");
          else
            out += "        -";
        } else {
          out += "  failed      ";
          out += "        -";
        }
      }
      out += "\n";
    }
  }
  return out;
}

std::string report_csv(const ConvergenceReport& report) {
  const RunConfig& cfg = report.config;
  std::string out =
      "problem,k,lambda,eps2,N,tau,dofs_total,dofs_free,err_discrete,order_discrete,"
      "err_vs_exact,order_vs_exact,energy_diff,solver,iterations,rel_residual,ok,message\n";
  for (double eps2 : cfg.eps2_values) {
    const auto row = report.row(eps2);
    const auto od = mode_orders(row, NormMode::Discrete);
    const auto ov = mode_orders(row, NormMode::VsExact);
    for (std::size_t ni = 0; ni < row.size(); ++ni) {
      const CellResult& c = *row[ni];
      out += cfg.problem + ',' + std::to_string(cfg.k) + ',' +
             fmt(cfg.lambda_resolved(), "%g") + ',' + eps2_label(eps2) + ',' +
             std::to_string(c.n) + ',' + fmt(c.tau, "%.12e") + ',' +
             std::to_string(c.dofs_total) + ',' + std::to_string(c.dofs_free) + ',';
      if (c.ok) {
        out += fmt(c.discrete.total) + ',';
        out += (ni >= 1 && ni - 1 < od.size()) ? fmt(od[ni - 1], "%.4f") : "";
        out += ',';
        out += fmt(c.vs_exact.total) + ',';
        out += (ni >= 1 && ni - 1 < ov.size()) ? fmt(ov[ni - 1], "%.4f") : "";
        out += ',';
        out += fmt(c.discrete.energy) + ',';
      } else {
        out += ",,,,,";
      }
      out += c.solve.method + ',' + std::to_string(c.solve.iterations) + ',' +
             (c.ok ? fmt(c.solve.rel_residual, "%.3e") : "") + ',' +
             (c.ok ? "1" : "0") + ',' + c.message + '\n';
    }
  }
  return out;
}

std::string report_json(const ConvergenceReport& report) {
  using json = nlohmann::ordered_json;
  const RunConfig& cfg = report.config;
  json j;
  j["schema"] = "wg-biharmonic-report/1";
  j["config"] = {{"problem", cfg.problem},
                 {"k", cfg.k},
                 {"n_values", cfg.n_values},
                 {"eps2_values", cfg.eps2_values},
                 {"lambda", cfg.lambda_resolved()},
                 {"solver", cfg.solver},
                 {"tol", cfg.tol},
                 {"quad_tri_degree", cfg.discretization().tri_degree()},
                 {"quad_edge_points", cfg.discretization().edge_points()},
                 {"wgrad_degree", cfg.discretization().grad_degree()},
                 {"boundary", cfg.boundary},
                 {"grid", cfg.grid}};
  auto breakdown = [](const ErrorBreakdown& b, bool with_energy) {
    json o = {{"lap_term", b.lap_term},
              {"grad_term", b.grad_term},
              {"react_term", b.react_term},
              {"stab_term", b.stab_term},
              {"total", b.total}};
    if (with_energy && std::isfinite(b.energy)) o["energy"] = b.energy;
    return o;
  };
  j["cells"] = json::array();
  for (const auto& c : report.cells) {
    json cell = {{"eps2", c.eps2},         {"N", c.n},
                 {"tau", c.tau},           {"dofs_total", c.dofs_total},
                 {"dofs_free", c.dofs_free}, {"ok", c.ok}};
    if (c.ok) {
      cell["discrete"] = breakdown(c.discrete, true);
      cell["vs_exact"] = breakdown(c.vs_exact, false);
      cell["solve"] = {{"method", c.solve.method},
                       {"iterations", c.solve.iterations},
                       {"rel_residual", c.solve.rel_residual},
                       {"seconds", c.solve.seconds},
                       {"min_pivot", c.solve.min_pivot}};
    }
    if (!c.message.empty()) cell["message"] = c.message;
    cell["total_seconds"] = c.total_seconds;
    j["cells"].push_back(cell);
  }
  j["orders"] = json::array();
  for (double eps2 : cfg.eps2_values) {
    const auto row = report.row(eps2);
    j["orders"].push_back(
        {{"eps2", eps2},
         {"discrete", mode_orders(row, NormMode::Discrete)},
         {"vs_exact", mode_orders(row, NormMode::VsExact)},
         {"energy", mode_orders(row, NormMode::Energy)}});
  }
  return j.dump(2) + "\n";
}

}  // namespace wgfem
