#include "wgfem/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace wgfem {

namespace {

// exp underflows to 0 well before -708; cutting early keeps the layer factors
// free of denormals at extreme x/epsilon ratios
double exp_guarded(double t) { return (t < -708.0) ? 0.0 : std::exp(t); }

constexpr double kBinom[5][5] = {{1, 0, 0, 0, 0},
                                 {1, 1, 0, 0, 0},
                                 {1, 2, 1, 0, 0},
                                 {1, 3, 3, 1, 0},
                                 {1, 4, 6, 4, 1}};

}  // namespace

Jet Jet::constant(double c) {
  Jet j;
  j.d[0][0] = c;
  return j;
}

Jet Jet::var_x(double x) {
  Jet j;
  j.d[0][0] = x;
  j.d[1][0] = 1.0;
  return j;
}

Jet Jet::var_y(double y) {
  Jet j;
  j.d[0][0] = y;
  j.d[0][1] = 1.0;
  return j;
}

Jet Jet::exp_x(double alpha, double beta, double x) {
  Jet j;
  const double v = exp_guarded(alpha * x + beta);
  double p = 1.0;
  for (int i = 0; i <= 4; ++i) {
    j.d[i][0] = p * v;
    p *= alpha;
  }
  return j;
}

Jet Jet::exp_y(double alpha, double beta, double y) {
  Jet j;
  const double v = exp_guarded(alpha * y + beta);
  double p = 1.0;
  for (int i = 0; i <= 4; ++i) {
    j.d[0][i] = p * v;
    p *= alpha;
  }
  return j;
}

Jet Jet::sin_x(double alpha, double beta, double x) {
  Jet j;
  const double t = alpha * x + beta;
  const double s = std::sin(t), c = std::cos(t);
  const double cycle[4] = {s, c, -s, -c};
  double p = 1.0;
  for (int i = 0; i <= 4; ++i) {
    j.d[i][0] = p * cycle[i % 4];
    p *= alpha;
  }
  return j;
}

Jet Jet::operator+(const Jet& o) const {
  Jet r;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) r.d[i][j] = d[i][j] + o.d[i][j];
  return r;
}

Jet Jet::operator-(const Jet& o) const {
  Jet r;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) r.d[i][j] = d[i][j] - o.d[i][j];
  return r;
}

Jet Jet::operator*(const Jet& o) const {
  Jet r;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) {
      double acc = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q)
          acc += kBinom[i][p] * kBinom[j][q] * d[p][q] * o.d[i - p][j - q];
      r.d[i][j] = acc;
    }
  return r;
}

Jet Jet::operator*(double c) const {
  Jet r;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) r.d[i][j] = c * d[i][j];
  return r;
}

namespace {

std::function<double(double, double)> manufactured_g(const ExactSolution& exact,
                                                     double epsilon,
                                                     std::function<double(double, double)> a) {
  const double eps2 = epsilon * epsilon;
  return [exact, eps2, a](double x, double y) {
    const Jet j = exact.jet(x, y);
    return eps2 * j.bilap() - j.lap() + a(x, y) * j.value();
  };
}

}  // namespace

ProblemSpec example1(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("example1: epsilon must be positive");
  const double q = exp_guarded(-1.0 / epsilon);
  const double d1 = 1.0 - q;
  const double d2 = 1.0 + q;
  const double inv_eps = 1.0 / epsilon;

  ExactSolution exact;
  exact.jet = [epsilon, q, d1, d2, inv_eps](double x, double y) {
    // x factor: sin(pi x) + (pi eps / d1)(e^{-x/eps} + e^{(x-1)/eps} - 1 - e^{-1/eps})
    const double cx = M_PI * epsilon / d1;
    const Jet fx = Jet::sin_x(M_PI, 0.0, x) +
                   cx * (Jet::exp_x(-inv_eps, 0.0, x) + Jet::exp_x(inv_eps, -inv_eps, x) +
                         Jet::constant(-1.0 - q));
    // y factor: 2y(1-y^2) + eps(d1 d2 (1-2y) - 3 d2/d1
    //           + (3/d1 - d2) e^{-y/eps} + (3/d1 + d2) e^{(y-1)/eps})
    const Jet yj = Jet::var_y(y);
    const Jet poly = 2.0 * yj * (Jet::constant(1.0) - yj * yj);
    const Jet lin = d1 * d2 * (Jet::constant(1.0) - 2.0 * yj) + Jet::constant(-3.0 * d2 / d1);
    const Jet layers = (3.0 / d1 - d2) * Jet::exp_y(-inv_eps, 0.0, y) +
                       (3.0 / d1 + d2) * Jet::exp_y(inv_eps, -inv_eps, y);
    const Jet fy = poly + epsilon * (lin + layers);
    return fx * fy;
  };

  ProblemSpec p;
  p.name = "example1";
  p.epsilon = epsilon;
  p.a = [](double, double) { return 0.0; };
  p.exact = exact;
  p.g = manufactured_g(exact, epsilon, p.a);
  p.boundary = BoundaryMode::HomogeneousClamped;
  return p;
}

ProblemSpec example2(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("example2: epsilon must be positive");
  const double inv_eps = 1.0 / epsilon;

  ExactSolution exact;
  exact.jet = [epsilon, inv_eps](double x, double y) {
    const Jet xj = Jet::var_x(x);
    const Jet yj = Jet::var_y(y);
    const Jet x2y = xj * xj * yj;
    const Jet near = epsilon * (Jet::exp_x(-inv_eps, 0.0, x) + Jet::exp_y(-inv_eps, 0.0, y)) - x2y;
    const Jet far = epsilon * (Jet::exp_x(inv_eps, -inv_eps, x) + Jet::exp_y(inv_eps, -inv_eps, y)) - x2y;
    const Jet bubble = xj * yj * (Jet::constant(1.0) - xj) * (Jet::constant(1.0) - yj);
    return 250.0 * near * far * bubble;
  };

  ProblemSpec p;
  p.name = "example2";
  p.epsilon = epsilon;
  p.a = [](double x, double) { return x; };
  p.exact = exact;
  p.g = manufactured_g(exact, epsilon, p.a);
  p.boundary = BoundaryMode::HomogeneousClamped;
  return p;
}

ProblemSpec patch_problem(int k, double epsilon, double a_const) {
  if (k != 2 && k != 3) throw std::invalid_argument("patch_problem: k must be 2 or 3");
  if (!(epsilon > 0.0)) throw std::invalid_argument("patch_problem: epsilon must be positive");

  ExactSolution exact;
  if (k == 2) {
    // u = x^2 + xy
    exact.jet = [](double x, double y) {
      const Jet xj = Jet::var_x(x);
      const Jet yj = Jet::var_y(y);
      return xj * xj + xj * yj;
    };
  } else {
    // u = x^3 + x^2 y
    exact.jet = [](double x, double y) {
      const Jet xj = Jet::var_x(x);
      const Jet yj = Jet::var_y(y);
      return xj * xj * xj + xj * xj * yj;
    };
  }

  ProblemSpec p;
  p.name = (k == 2) ? "patch-k2" : "patch-k3";
  p.epsilon = epsilon;
  p.a = [a_const](double, double) { return a_const; };
  p.exact = exact;
  p.g = manufactured_g(exact, epsilon, p.a);
  p.boundary = BoundaryMode::FromExact;
  return p;
}

ProblemSpec make_problem(const std::string& name, double epsilon) {
  if (name == "example1") return example1(epsilon);
  if (name == "example2") return example2(epsilon);
  if (name == "patch-k2") return patch_problem(2, epsilon);
  if (name == "patch-k3") return patch_problem(3, epsilon);
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace wgfem
