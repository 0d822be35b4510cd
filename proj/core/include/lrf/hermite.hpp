#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "lrf/covmodels.hpp"

namespace lrf {

/// Probabilists' Hermite polynomial H_m(x), leading coefficient one.
/// Throws for m > 30 (overflow guard) or m < 0.
double hermite_eval(int m, double x);

inline constexpr int kMaxHermiteOrder = 30;

/// Square-integrable test function of a standard Gaussian.
struct TestFunction {
  enum class Family { monomial, indicator_positive, absolute_value, custom };

  Family family = Family::monomial;
  int power = 0;
  std::function<double(double)> fn;
  std::vector<double> breakpoints;  // known kinks/jumps, used by the quadrature

  double operator()(double x) const;

  static TestFunction monomial(int p);
  static TestFunction indicator_positive();
  static TestFunction absolute_value();
  static TestFunction custom(std::function<double(double)> f,
                             std::vector<double> breakpoints = {});
};

struct HermiteExpansion {
  std::vector<double> coeffs;  // C_0 .. C_jmax
  int jmax = 0;
  int quadrature_nodes = 0;
};

/// C_j = E[G(Z) H_j(Z)] for j <= jmax. Smooth families use an n-node
/// Gauss-Hermite rule for the phi weight; families with declared
/// breakpoints are integrated piecewise so the coefficients converge to
/// quadrature precision despite the kink or jump.
HermiteExpansion hermite_coefficients(const TestFunction& G, int jmax, int nodes);

/// Smallest j >= 1 with |C_j| > rank_tol * max_{1<=i<=jmax} |C_i|.
/// Throws if every coefficient is below the threshold.
int hermite_rank(const TestFunction& G, int jmax, double rank_tol = 1e-8);

/// | sum_{j<=jmax} C_j^2 / j!  -  E[G^2] |, the truncated Parseval defect.
double parseval_gap(const TestFunction& G, int jmax, int nodes);

/// E[G^2(Z)] with the same quadrature rules as hermite_coefficients.
double second_moment(const TestFunction& G, int nodes);

struct McEstimate {
  double estimate;
  double stderr_;
};

/// Monte Carlo estimate of E[H_{m1}(xi(0)) H_{m2}(xi(x))] at ||x|| = r using
/// exact bivariate Gaussian pairs with correlation B(r). The orthogonality
/// identity gives the target delta_{m1m2} m1! B^{m1}(r).
McEstimate orthogonality_mc_check(const CovarianceModel& model, int m1, int m2,
                                  double r, long reps, std::uint64_t seed);

}  // namespace lrf
