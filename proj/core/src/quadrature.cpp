#include "lrf/quadrature.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "lrf/errors.hpp"

namespace lrf::quad {

namespace {

Rule compute_gauss_legendre(int order) {
  // Newton iteration on P_n with the three-term recurrence.
  Rule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

std::mutex g_rule_mutex;

}  // namespace

const Rule& gauss_legendre(int order) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double gl_panel(const std::function<double(double)>& f, double a, double b,
                int order) {
  const Rule& r = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < order; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

double gl_composite(const std::function<double(double)>& f, double a, double b,
                    int panels, int order) {
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) s += gl_panel(f, a + p * h, a + (p + 1) * h, order);
  return s;
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double tol, int depth, int max_depth, double whole) {
  const double mid = 0.5 * (a + b);
  const double left = gl_panel(f, a, mid, 16);
  const double right = gl_panel(f, mid, b, 16);
  const double err = std::abs(left + right - whole);
  if (err < tol || depth >= max_depth) {
    if (depth >= max_depth && err > 64.0 * tol)
      throw quadrature_failure("adaptive quadrature: depth exhausted", err);
    return left + right;
  }
  return adaptive_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth, left) +
         adaptive_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth, right);
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double whole = gl_panel(f, a, b, 16);
  return adaptive_rec(f, a, b, abs_tol, 0, max_depth, whole);
}

namespace {

// Orthonormal probabilists' Hermite values p_0..p_n at x (long double).
void hermite_orthonormal(int n, long double x, long double* p) {
  p[0] = 1.0L;
  if (n >= 1) p[1] = x;
  for (int k = 1; k < n; ++k)
    p[k + 1] = (x * p[k] - std::sqrt(static_cast<long double>(k)) * p[k - 1]) /
               std::sqrt(static_cast<long double>(k + 1));
}

}  // namespace

const HermiteRule& gauss_hermite_prob(int n) {
  static std::map<int, HermiteRule> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Golub-Welsch on the Jacobi matrix (zero diagonal, off-diagonal sqrt(k))
  // supplies node estimates; Newton polishing on the orthonormal recurrence
  // brings them to machine precision, and the Christoffel identity
  // w = 1 / sum_{j<n} p_j(x)^2 gives weights consistent with those nodes.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_prob: eigen decomposition failed");

  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<long double> p(n + 1);
  for (int i = 0; i < n; ++i) {
    long double x = es.eigenvalues()(i);
    for (int it2 = 0; it2 < 8; ++it2) {
      hermite_orthonormal(n, x, p.data());
      const long double deriv = std::sqrt(static_cast<long double>(n)) * p[n - 1];
      const long double dx = p[n] / deriv;
      x -= dx;
      if (std::abs(static_cast<double>(dx)) < 1e-18 * std::max(1.0, std::abs(static_cast<double>(x))))
        break;
    }
    hermite_orthonormal(n, x, p.data());
    long double chr = 0.0L;
    for (int j = 0; j < n; ++j) chr += p[j] * p[j];
    rule.nodes[i] = static_cast<double>(x);
    rule.weights[i] = static_cast<double>(1.0L / chr);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

Halton::Halton(int dim, long skip) : dim_(dim), index_(skip) {
  if (dim < 1 || dim > 6) throw std::invalid_argument("Halton: dim must be in [1,6]");
}

std::vector<double> Halton::next() {
  static constexpr std::array<int, 6> bases = {2, 3, 5, 7, 11, 13};
  std::vector<double> pt(dim_);
  for (int d = 0; d < dim_; ++d) {
    const int b = bases[d];
    double f = 1.0, x = 0.0;
    long i = index_;
    while (i > 0) {
      f /= b;
      x += f * (i % b);
      i /= b;
    }
    pt[d] = x;
  }
  ++index_;
  return pt;
}

namespace {

// Integral of [optionally prod_l (1 - |u_l|)] * ||u||^{-s} over [-1,1]^n via
// dyadic shells toward the origin; each shell is a box difference handled
// with tensor Gauss-Legendre, so the singular corner is never touched.
double shellwise_riesz(int n, double s, bool tri_weight) {
  const Rule& r = gauss_legendre(24);
  const int order = 24;

  // Tensor integral of the integrand over an axis-aligned box.
  auto box_integral = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
    double sum = 0.0;
    std::vector<int> idx(n, 0);
    std::vector<double> u(n);
    while (true) {
      double w = 1.0;
      for (int d = 0; d < n; ++d) {
        const double mid = 0.5 * (lo[d] + hi[d]);
        const double half = 0.5 * (hi[d] - lo[d]);
        u[d] = mid + half * r.nodes[idx[d]];
        w *= half * r.weights[idx[d]];
      }
      double norm2 = 0.0, tri = 1.0;
      for (int d = 0; d < n; ++d) {
        norm2 += u[d] * u[d];
        if (tri_weight) tri *= 1.0 - std::abs(u[d]);
      }
      sum += w * tri * std::pow(norm2, -0.5 * s);
      int d = 0;
      while (d < n && ++idx[d] == order) idx[d++] = 0;
      if (d == n) break;
    }
    return sum;
  };

  // By symmetry integrate over [0,1]^n and multiply by 2^n. Decompose
  // [0,1]^n = union of shells [0,2^-k]^n \ [0,2^-(k+1)]^n; each shell is
  // covered by boxes with one coordinate in the outer half.
  double total = 0.0;
  const int max_levels = 60;
  for (int k = 0; k < max_levels; ++k) {
    const double outer = std::pow(0.5, k);
    const double inner = 0.5 * outer;
    double shell = 0.0;
    // Boxes: first coordinate with index j is in [inner, outer], coords
    // before j range over [0, inner], coords after j over [0, outer].
    for (int j = 0; j < n; ++j) {
      std::vector<double> lo(n), hi(n);
      for (int d = 0; d < n; ++d) {
        if (d < j) {
          lo[d] = 0.0;
          hi[d] = inner;
        } else if (d == j) {
          lo[d] = inner;
          hi[d] = outer;
        } else {
          lo[d] = 0.0;
          hi[d] = outer;
        }
      }
      shell += box_integral(lo, hi);
    }
    total += shell;
    if (k > 4 && shell < 1e-14 * std::abs(total)) break;
  }
  return total * std::pow(2.0, n);
}

}  // namespace

double diagonal_cell_constant(int n, double s) {
  if (n < 1 || n > 3) throw std::invalid_argument("diagonal_cell_constant: n in {1,2,3}");
  if (s < 0.0 || s >= n)
    throw std::domain_error("diagonal_cell_constant: requires 0 <= s < n");
  static std::map<std::pair<int, double>, double> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(n, s);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  double value;
  if (n == 1) {
    // Closed form: 2 / ((1-s)(2-s)).
    value = 2.0 / ((1.0 - s) * (2.0 - s));
  } else {
    value = shellwise_riesz(n, s, true);
  }
  return cache.emplace(key, value).first->second;
}

double box_riesz_mass(int n, double s) {
  if (n < 1 || n > 3) throw std::invalid_argument("box_riesz_mass: n in {1,2,3}");
  if (s < 0.0 || s >= n) throw std::domain_error("box_riesz_mass: requires 0 <= s < n");
  static std::map<std::pair<int, double>, double> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(n, s);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double value = (n == 1) ? 2.0 / (1.0 - s) : shellwise_riesz(n, s, false);
  return cache.emplace(key, value).first->second;
}

}  // namespace lrf::quad
