#pragma once

#include <functional>
#include <vector>

namespace lrf::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule of the given order (cached, thread-safe).
const Rule& gauss_legendre(int order);

/// Integrate f over [a, b] with a single Gauss-Legendre panel.
double gl_panel(const std::function<double(double)>& f, double a, double b,
                int order = 16);

/// Integrate f over [a, b] with n equal Gauss-Legendre panels.
double gl_composite(const std::function<double(double)>& f, double a, double b,
                    int panels, int order = 16);

/// Adaptive bisection, error estimated from the GL16/GL8 difference.
/// Throws quadrature_failure if the tolerance cannot be met within max_depth.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int max_depth = 48);

struct HermiteRule {
  std::vector<double> nodes;    // abscissas of the standard normal weight
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Hermite rule for the probabilists' weight phi(x) = exp(-x^2/2)/sqrt(2 pi),
/// computed by Golub-Welsch on the Jacobi matrix (cached).
const HermiteRule& gauss_hermite_prob(int n);

/// Deterministic Halton low-discrepancy sequence in [0,1)^dim, dim <= 6.
class Halton {
 public:
  explicit Halton(int dim, long skip = 64);
  std::vector<double> next();

 private:
  int dim_;
  long index_;
};

/// kappa_n(s) = integral over [0,1]^n x [0,1]^n of ||x - y||^{-s},
/// the self-interaction constant of a unit cell under the Riesz kernel.
/// Requires 0 <= s < n. Cached per (n, s).
double diagonal_cell_constant(int n, double s);

/// integral over [-1,1]^n of ||u||^{-s} du, 0 <= s < n. Cached.
double box_riesz_mass(int n, double s);

}  // namespace lrf::quad
