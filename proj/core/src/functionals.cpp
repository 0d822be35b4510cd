#include "lrf/functionals.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lrf/errors.hpp"

namespace lrf {

double WeightFunction::eval_raw(const double* t, int dim) const {
  switch (family) {
    case Family::constant:
      return c;
    case Family::power: {
      double v = 1.0;
      for (int d = 0; d < dim; ++d) v *= std::pow(t[d], mu[d]);
      return v;
    }
    case Family::power_log: {
      double v = 1.0;
      for (int d = 0; d < dim; ++d) v *= t[d] * std::log(mu[d] + t[d]);
      return v;
    }
  }
  throw std::logic_error("WeightFunction: unknown family");
}

double WeightFunction::operator()(const std::vector<double>& t) const {
  if (static_cast<int>(t.size()) != n)
    throw std::invalid_argument("WeightFunction: argument dimension mismatch");
  return eval_raw(t.data(), n);
}

double WeightFunction::limit_raw(const double* u, int dim) const {
  switch (family) {
    case Family::constant:
      return 1.0;
    case Family::power: {
      double v = 1.0;
      for (int d = 0; d < dim; ++d) v *= std::pow(u[d], mu[d]);
      return v;
    }
    case Family::power_log: {
      double v = 1.0;
      for (int d = 0; d < dim; ++d) v *= u[d];
      return v;
    }
  }
  throw std::logic_error("WeightFunction: unknown family");
}

double WeightFunction::limit(const std::vector<double>& u) const {
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("WeightFunction: argument dimension mismatch");
  return limit_raw(u.data(), n);
}

double WeightFunction::at_diagonal(double T) const {
  return (*this)(std::vector<double>(n, T));
}

WeightFunction WeightFunction::constant(int n, double c) {
  if (c == 0.0) throw std::invalid_argument("WeightFunction::constant: c must be nonzero");
  WeightFunction g;
  g.family = Family::constant;
  g.n = n;
  g.c = c;
  return g;
}

WeightFunction WeightFunction::power(std::vector<double> mu) {
  WeightFunction g;
  g.family = Family::power;
  g.n = static_cast<int>(mu.size());
  for (double m : mu)
    if (m < 0.0) throw std::invalid_argument("WeightFunction::power: mu_l >= 0");
  g.mu = std::move(mu);
  return g;
}

WeightFunction WeightFunction::power_log(std::vector<double> mu) {
  WeightFunction g;
  g.family = Family::power_log;
  g.n = static_cast<int>(mu.size());
  for (double m : mu)
    if (m <= 0.0) throw std::invalid_argument("WeightFunction::power_log: mu_l > 0");
  g.mu = std::move(mu);
  return g;
}

std::string WeightFunction::describe() const {
  std::ostringstream os;
  switch (family) {
    case Family::constant:
      os << "constant(" << c << ")";
      return os.str();
    case Family::power:
      os << "power(";
      break;
    case Family::power_log:
      os << "power_log(";
      break;
  }
  for (int d = 0; d < n; ++d) os << (d ? "," : "") << mu[d];
  os << ")";
  return os.str();
}

double weighted_sum_functional(const FieldSample& field, const WeightFunction& g,
                               int m, const std::vector<long>& T) {
  const GridSpec& grid = field.grid;
  if (static_cast<int>(T.size()) != grid.n || g.n != grid.n)
    throw std::invalid_argument("weighted_sum_functional: dimension mismatch");
  for (int d = 0; d < grid.n; ++d) {
    if (grid.spacing[d] != 1.0 || grid.origin[d] != 0.0 || grid.counts[d] < T[d])
      throw std::invalid_argument(
          "weighted_sum_functional: field grid does not cover the integer lattice {0..T-1}");
  }

  std::vector<long> idx(grid.n, 0);
  std::vector<double> t(grid.n);
  double sum = 0.0;
  while (true) {
    for (int d = 0; d < grid.n; ++d) t[d] = static_cast<double>(idx[d]);
    sum += g(t) * hermite_eval(m, field.values[grid.flat_index(idx)]);
    int d = grid.n - 1;
    while (d >= 0) {
      if (++idx[d] < T[d]) break;
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return sum;
}

double weighted_integral_functional(const FieldSample& field, const WeightFunction& g,
                                    int m, const std::vector<double>& T, int q) {
  const GridSpec& grid = field.grid;
  if (static_cast<int>(T.size()) != grid.n || g.n != grid.n)
    throw std::invalid_argument("weighted_integral_functional: dimension mismatch");
  const double h = 1.0 / q;
  for (int d = 0; d < grid.n; ++d) {
    const double cells = T[d] * q;
    if (std::abs(cells - std::round(cells)) > 1e-9)
      throw std::invalid_argument("weighted_integral_functional: T_l * q must be integral");
    if (std::abs(grid.spacing[d] - h) > 1e-12 || std::abs(grid.origin[d] - 0.5 * h) > 1e-12 ||
        grid.counts[d] < static_cast<long>(std::round(cells)))
      throw std::invalid_argument(
          "weighted_integral_functional: field grid is not the covering midpoint grid");
  }

  const double cell_volume = std::pow(h, grid.n);
  std::vector<long> idx(grid.n, 0);
  std::vector<long> lim(grid.n);
  for (int d = 0; d < grid.n; ++d) lim[d] = static_cast<long>(std::round(T[d] * q));
  std::vector<double> t(grid.n);
  double sum = 0.0;
  while (true) {
    for (int d = 0; d < grid.n; ++d) t[d] = grid.origin[d] + idx[d] * h;
    sum += g(t) * hermite_eval(m, field.values[grid.flat_index(idx)]);
    int d = grid.n - 1;
    while (d >= 0) {
      if (++idx[d] < lim[d]) break;
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return sum * cell_volume;
}

double normalizer(int n, int m, double alpha, const SlowlyVarying& L,
                  const WeightFunction& g, double Ttilde) {
  if (Ttilde < 1.0) throw std::invalid_argument("normalizer: Ttilde >= 1 required");
  if (alpha * m >= n)
    throw long_range_violation(
        "normalizer: alpha*m >= n leaves the long-range regime (unbounded variance)");
  return std::pow(Ttilde, n - 0.5 * m * alpha) * std::abs(g.at_diagonal(Ttilde)) *
         std::pow(slowly_varying_eval(L, Ttilde), 0.5 * m);
}

Theorem1Pair theorem1_pair(const TestFunction& G, int kappa, const FieldSample& field,
                           const std::vector<double>& T, int q) {
  const int jmax = std::max(10, kappa + 2);
  if (hermite_rank(G, jmax) != kappa)
    throw std::invalid_argument("theorem1_pair: hermite_rank(G) != kappa");
  const HermiteExpansion e = hermite_coefficients(G, kappa, std::max(200, 4 * kappa));
  const double c0 = e.coeffs[0];
  const double ck = e.coeffs[kappa];
  double kappa_fact = 1.0;
  for (int j = 2; j <= kappa; ++j) kappa_fact *= j;

  // Both integrals ride on the same realization and midpoint grid; T gives
  // the per-axis extent of the integration box.
  const GridSpec& grid = field.grid;
  const double h = 1.0 / q;
  for (int d = 0; d < grid.n; ++d) {
    if (std::abs(grid.spacing[d] - h) > 1e-12 ||
        std::abs(grid.counts[d] * h - T[d]) > 1e-9)
      throw std::invalid_argument(
          "theorem1_pair: field grid is not a 1/q midpoint grid of extent T");
  }
  const double cell_volume = std::pow(h, grid.n);
  double int_g = 0.0, int_h = 0.0;
  for (long i = 0; i < grid.total(); ++i) {
    const double v = field.values[i];
    int_g += G(v) - c0;
    int_h += hermite_eval(kappa, v);
  }
  return Theorem1Pair{int_g * cell_volume, (ck / kappa_fact) * int_h * cell_volume};
}

double weight_limit_gap(const WeightFunction& g, double Ttilde, int grid_points) {
  if (Ttilde < 1.0) throw std::invalid_argument("weight_limit_gap: Ttilde >= 1 required");
  if (grid_points < 2) throw std::invalid_argument("weight_limit_gap: grid_points >= 2");
  const double g_diag = g.at_diagonal(Ttilde);
  std::vector<long> idx(g.n, 0);
  std::vector<double> u(g.n), tu(g.n);
  double worst = 0.0;
  while (true) {
    for (int d = 0; d < g.n; ++d) {
      u[d] = static_cast<double>(idx[d]) / (grid_points - 1);
      tu[d] = Ttilde * u[d];
    }
    worst = std::max(worst, std::abs(g(tu) / g_diag - g.limit(u)));
    int d = g.n - 1;
    while (d >= 0) {
      if (++idx[d] < grid_points) break;
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return worst;
}

}  // namespace lrf
