#pragma once

#include <string>
#include <vector>

#include "lrf/grid.hpp"
#include "lrf/hermite.hpp"
#include "lrf/slowly_varying.hpp"

namespace lrf {

/// Weight g(t) on nonnegative coordinates together with its scaling limit
/// g*(u) = lim_T g(Tu)/g(T 1) on [0,1]^n.
struct WeightFunction {
  enum class Family { constant, power, power_log };

  Family family = Family::constant;
  int n = 1;
  double c = 1.0;
  std::vector<double> mu;

  double operator()(const std::vector<double>& t) const;
  /// Allocation-free evaluation for quadrature hot loops.
  double eval_raw(const double* t, int dim) const;
  /// The limit weight g*(u).
  double limit(const std::vector<double>& u) const;
  double limit_raw(const double* u, int dim) const;
  /// g(T, ..., T).
  double at_diagonal(double T) const;

  static WeightFunction constant(int n, double c);
  /// g(t) = prod t_l^{mu_l}, mu_l >= 0; g*(u) = prod u_l^{mu_l} exactly.
  static WeightFunction power(std::vector<double> mu);
  /// g(t) = prod t_l log(mu_l + t_l), mu_l > 0; g*(u) = prod u_l.
  static WeightFunction power_log(std::vector<double> mu);

  std::string describe() const;
};

struct FunctionalResult {
  double raw = 0.0;
  double normalizer = 1.0;
  double normalized = 0.0;
};

/// sum over i in prod {0..T_l-1} of g(i) H_m(xi(i)); field must cover the
/// integer lattice (spacing 1, origin 0).
double weighted_sum_functional(const FieldSample& field, const WeightFunction& g,
                               int m, const std::vector<long>& T);

/// Midpoint-rule approximation of the integral over prod [0, T_l] of
/// g(t) H_m(xi(t)) dt; field must be the spacing-1/q midpoint grid.
double weighted_integral_functional(const FieldSample& field, const WeightFunction& g,
                                    int m, const std::vector<double>& T, int q);

/// d = Ttilde^{n - m alpha/2} |g(Ttilde 1)| L^{m/2}(Ttilde).
/// Throws long_range_violation when alpha m >= n.
double normalizer(int n, int m, double alpha, const SlowlyVarying& L,
                  const WeightFunction& g, double Ttilde);

struct Theorem1Pair {
  double K_r;        // integral of G(xi) - C_0 (centered)
  double K_r_kappa;  // (C_kappa / kappa!) integral of H_kappa(xi)
};

/// Both functionals over the same realization on a midpoint grid covering
/// prod [0, T_l] at refinement q. Checks hermite_rank(G) == kappa.
Theorem1Pair theorem1_pair(const TestFunction& G, int kappa, const FieldSample& field,
                           const std::vector<double>& T, int q);

/// max over a uniform grid of u in [0,1]^n of |g(Tu)/g(T 1) - g*(u)|.
double weight_limit_gap(const WeightFunction& g, double Ttilde, int grid_points);

}  // namespace lrf
