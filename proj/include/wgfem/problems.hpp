#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

namespace wgfem {

/// Value and all partial derivatives up to total order 4 at one point.
/// d(i,j) = d^{i+j} f / dx^i dy^j.
struct Jet {
  double d[5][5] = {};

  static Jet constant(double c);
  static Jet var_x(double x);
  static Jet var_y(double y);
  /// e^{alpha*x + beta} (constant in y), underflow-safe for large negative exponents.
  static Jet exp_x(double alpha, double beta, double x);
  static Jet exp_y(double alpha, double beta, double y);
  /// sin(alpha*x + beta) (constant in y).
  static Jet sin_x(double alpha, double beta, double x);

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;  // Leibniz rule, truncated at order 4
  Jet operator*(double c) const;
  friend Jet operator*(double c, const Jet& j) { return j * c; }

  double value() const { return d[0][0]; }
  Eigen::Vector2d grad() const { return {d[1][0], d[0][1]}; }
  double lap() const { return d[2][0] + d[0][2]; }
  Eigen::Vector2d grad_lap() const { return {d[3][0] + d[1][2], d[2][1] + d[0][3]}; }
  double bilap() const { return d[4][0] + 2.0 * d[2][2] + d[0][4]; }
};

/// Exact solution with the full derivative bundle needed by the norms and the
/// manufactured right-hand side.
struct ExactSolution {
  std::function<Jet(double, double)> jet;

  double value(double x, double y) const { return jet(x, y).value(); }
  Eigen::Vector2d grad(double x, double y) const { return jet(x, y).grad(); }
  double lap(double x, double y) const { return jet(x, y).lap(); }
  Eigen::Vector2d grad_lap(double x, double y) const { return jet(x, y).grad_lap(); }
  double bilap(double x, double y) const { return jet(x, y).bilap(); }
};

enum class BoundaryMode { HomogeneousClamped, FromExact };

struct ProblemSpec {
  std::string name;
  double epsilon = 1.0;
  std::function<double(double, double)> a;  // reaction coefficient, 0 <= a1 < a <= a2
  std::function<double(double, double)> g;  // source term
  std::optional<ExactSolution> exact;
  BoundaryMode boundary = BoundaryMode::HomogeneousClamped;
};

/// a = 0; exact solution is the sin/exponential-layer product of the first
/// model example, g manufactured from the derivative bundle.
ProblemSpec example1(double epsilon);

/// a = x; exact solution 250 [eps(e^{-x/eps}+e^{-y/eps}) - x^2 y]
/// [eps(e^{-(1-x)/eps}+e^{-(1-y)/eps}) - x^2 y] xy(1-x)(1-y).
ProblemSpec example2(double epsilon);

/// Polynomial patch problem of total degree k with boundary data taken from
/// the exact polynomial; the strongest available correctness oracle.
ProblemSpec patch_problem(int k, double epsilon, double a_const = 1.0);

/// Registry addressable by name: example1, example2, patch-k2, patch-k3.
ProblemSpec make_problem(const std::string& name, double epsilon);

}  // namespace wgfem
