#include "wgfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace wgfem {

namespace {

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pn = 0.0, pnm1 = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      pnm1 = 1.0;  // P_0
      pn = xi;     // P_1
      for (int j = 2; j <= n; ++j) {
        const double t = ((2 * j - 1) * xi * pn - (j - 1) * pnm1) / j;
        pnm1 = pn;
        pn = t;
      }
      dp = n * (xi * pn - pnm1) / (xi * xi - 1.0);
      const double dx = pn / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) {
        // one polishing pass after convergence
        if (it > 0) break;
      }
    }
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  std::vector<std::pair<double, double>> nw(n);
  for (int i = 0; i < n; ++i) nw[i] = {x[i], w[i]};
  std::sort(nw.begin(), nw.end());
  for (int i = 0; i < n; ++i) {
    x[i] = nw[i].first;
    w[i] = nw[i].second;
  }
}

// Gauss-Jacobi nodes/weights on [-1,1] for the weight (1-x), via Golub-Welsch.
void gauss_jacobi10(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int kk = 0; kk < n; ++kk) {
    jac(kk, kk) = -1.0 / ((2.0 * kk + 1.0) * (2.0 * kk + 3.0));
    if (kk >= 1) {
      const double b = kk * (kk + 1.0) / ((2.0 * kk + 1.0) * (2.0 * kk + 1.0));
      jac(kk, kk - 1) = jac(kk - 1, kk) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  const double mu0 = 2.0;  // int_{-1}^{1} (1-x) dx
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = mu0 * v * v;
  }
}

// Conical-product rule on the reference triangle, exact to degree 2n-1.
QuadRule conical_rule(int n) {
  std::vector<double> xj, wj, xl, wl;
  gauss_jacobi10(n, xj, wj);
  gauss_legendre(n, xl, wl);
  QuadRule r;
  r.points.resize(n * n, 2);
  r.weights.resize(n * n);
  int p = 0;
  for (int i = 0; i < n; ++i) {
    const double xi = 0.5 * (xj[i] + 1.0);
    const double wxi = wj[i] / 4.0;  // maps weight (1-x) on [-1,1] to (1-xi) on [0,1]
    for (int j = 0; j < n; ++j) {
      const double eta = 0.5 * (xl[j] + 1.0);
      const double weta = wl[j] / 2.0;
      r.points(p, 0) = xi;
      r.points(p, 1) = eta * (1.0 - xi);
      r.weights(p) = wxi * weta;
      ++p;
    }
  }
  r.exactness = 2 * n - 1;
  return r;
}

// Average a rule over the 6 affine symmetries of the reference triangle and
// merge coincident points. Keeps exactness, makes the point set symmetric.
QuadRule symmetrize(const QuadRule& in) {
  struct Pt {
    double x, y, w;
  };
  std::vector<Pt> pts;
  pts.reserve(6 * in.size());
  for (int i = 0; i < in.size(); ++i) {
    const double x = in.points(i, 0), y = in.points(i, 1);
    const double z = 1.0 - x - y;
    const double w = in.weights(i) / 6.0;
    const double b[6][2] = {{x, y}, {y, x}, {x, z}, {z, x}, {y, z}, {z, y}};
    for (auto& q : b) pts.push_back({q[0], q[1], w});
  }
  // keep duplicates: merging near-coincident images with rounding-dependent
  // bits would break the exact symmetry of the weighted point set
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  QuadRule r;
  r.points.resize(static_cast<int>(pts.size()), 2);
  r.weights.resize(static_cast<int>(pts.size()));
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    r.points(i, 0) = pts[i].x;
    r.points(i, 1) = pts[i].y;
    r.weights(i) = pts[i].w;
  }
  r.exactness = in.exactness;
  return r;
}

QuadRule orbit_rule(std::initializer_list<std::tuple<double, double, double>> orbits,
                    int exactness) {
  // Each entry (a, b, w): barycentric point (a, b, 1-a-b) expanded over all
  // distinct permutations, weight w per point (normalized to sum 1).
  std::vector<std::array<double, 3>> pts;
  for (const auto& [a, b, w] : orbits) {
    const double c = 1.0 - a - b;
    const double perms[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
    std::vector<std::array<double, 2>> uniq;
    for (auto& p : perms) {
      bool dup = false;
      for (auto& u : uniq)
        if (std::abs(u[0] - p[0]) < 1e-14 && std::abs(u[1] - p[1]) < 1e-14) dup = true;
      if (!dup) uniq.push_back({p[0], p[1]});
    }
    for (auto& u : uniq) pts.push_back({u[0], u[1], w});
  }
  QuadRule r;
  r.points.resize(static_cast<int>(pts.size()), 2);
  r.weights.resize(static_cast<int>(pts.size()));
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    r.points(i, 0) = pts[i][0];
    r.points(i, 1) = pts[i][1];
    r.weights(i) = 0.5 * pts[i][2];  // reference triangle area 1/2
  }
  r.exactness = exactness;
  return r;
}

}  // namespace

QuadRule tri_quadrature(int degree) {
  if (degree < 1) throw std::invalid_argument("tri_quadrature: degree must be >= 1");
  if (degree == 1) return orbit_rule({{1.0 / 3.0, 1.0 / 3.0, 1.0}}, 1);
  if (degree == 2) return orbit_rule({{2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0}}, 2);
  if (degree <= 5) {
    // Classic 7-point degree-5 rule in closed form.
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 + s) / 21.0, w1 = (155.0 + s) / 1200.0;
    const double a2 = (6.0 - s) / 21.0, w2 = (155.0 - s) / 1200.0;
    return orbit_rule({{1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0}, {a1, a1, w1}, {a2, a2, w2}}, 5);
  }
  const int n = (degree + 2) / 2;  // conical rule exact to 2n-1 >= degree
  QuadRule r = symmetrize(conical_rule(n));
  r.exactness = degree;
  return r;
}

QuadRule edge_quadrature(int npts) {
  if (npts < 1) throw std::invalid_argument("edge_quadrature: npts must be >= 1");
  std::vector<double> x, w;
  gauss_legendre(npts, x, w);
  QuadRule r;
  r.points.setZero(npts, 2);
  r.weights.resize(npts);
  for (int i = 0; i < npts; ++i) {
    r.points(i, 0) = 0.5 * (x[i] + 1.0);
    r.weights(i) = 0.5 * w[i];
  }
  r.exactness = 2 * npts - 1;
  return r;
}

const QuadRule& tri_rule_cached(int degree) {
  static std::mutex mtx;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, tri_quadrature(degree)).first;
  return it->second;
}

const QuadRule& edge_rule_cached(int npts) {
  static std::mutex mtx;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(npts);
  if (it == cache.end()) it = cache.emplace(npts, edge_quadrature(npts)).first;
  return it->second;
}

}  // namespace wgfem
