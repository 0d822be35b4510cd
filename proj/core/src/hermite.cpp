#include "lrf/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrf/quadrature.hpp"
#include "lrf/rng.hpp"

namespace lrf {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684;

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

void hermite_all(int jmax, double x, std::vector<double>& out) {
  out.resize(jmax + 1);
  out[0] = 1.0;
  if (jmax >= 1) out[1] = x;
  for (int m = 1; m < jmax; ++m) out[m + 1] = x * out[m] - m * out[m - 1];
}

}  // namespace

double hermite_eval(int m, double x) {
  if (m < 0) throw std::domain_error("hermite_eval: order must be nonnegative");
  if (m > kMaxHermiteOrder)
    throw std::domain_error("hermite_eval: order exceeds the overflow guard (30)");
  double p0 = 1.0;
  if (m == 0) return p0;
  double p1 = x;
  for (int k = 1; k < m; ++k) {
    const double p2 = x * p1 - k * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double TestFunction::operator()(double x) const {
  switch (family) {
    case Family::monomial:
      return std::pow(x, power);
    case Family::indicator_positive:
      return x > 0.0 ? 1.0 : 0.0;
    case Family::absolute_value:
      return std::abs(x);
    case Family::custom:
      return fn(x);
  }
  throw std::logic_error("TestFunction: unknown family");
}

TestFunction TestFunction::monomial(int p) {
  if (p < 0) throw std::domain_error("TestFunction::monomial: power must be nonnegative");
  TestFunction g;
  g.family = Family::monomial;
  g.power = p;
  return g;
}

TestFunction TestFunction::indicator_positive() {
  TestFunction g;
  g.family = Family::indicator_positive;
  g.breakpoints = {0.0};
  return g;
}

TestFunction TestFunction::absolute_value() {
  TestFunction g;
  g.family = Family::absolute_value;
  g.breakpoints = {0.0};
  return g;
}

TestFunction TestFunction::custom(std::function<double(double)> f,
                                  std::vector<double> breakpoints) {
  TestFunction g;
  g.family = Family::custom;
  g.fn = std::move(f);
  g.breakpoints = std::move(breakpoints);
  std::sort(g.breakpoints.begin(), g.breakpoints.end());
  return g;
}

namespace {

// E[F(Z) H_j(Z)] for all j <= jmax at once.
//
// Smooth integrands use the probabilists' Gauss-Hermite rule. When F has
// declared breakpoints the integral is split there and each smooth piece is
// integrated with unit-width Gauss-Legendre panels against phi, truncated at
// |x| = 40 where phi has decayed past any representable contribution.
std::vector<double> weighted_moments(const TestFunction& F, int jmax, int nodes) {
  std::vector<double> mom(jmax + 1, 0.0);
  std::vector<double> h;
  if (F.breakpoints.empty()) {
    const quad::HermiteRule& rule = quad::gauss_hermite_prob(nodes);
    for (int i = 0; i < nodes; ++i) {
      const double x = rule.nodes[i];
      const double w = rule.weights[i] * F(x);
      hermite_all(jmax, x, h);
      for (int j = 0; j <= jmax; ++j) mom[j] += w * h[j];
    }
    return mom;
  }

  constexpr double kRange = 40.0;
  std::vector<double> edges;
  edges.push_back(-kRange);
  for (double b : F.breakpoints)
    if (b > -kRange && b < kRange) edges.push_back(b);
  edges.push_back(kRange);

  const quad::Rule& gl = quad::gauss_legendre(32);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double step = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * step;
      const double mid = a + 0.5 * step, half = 0.5 * step;
      for (int i = 0; i < 32; ++i) {
        const double x = mid + half * gl.nodes[i];
        const double w = half * gl.weights[i] * F(x) * normal_pdf(x);
        hermite_all(jmax, x, h);
        for (int j = 0; j <= jmax; ++j) mom[j] += w * h[j];
      }
    }
  }
  return mom;
}

}  // namespace

HermiteExpansion hermite_coefficients(const TestFunction& G, int jmax, int nodes) {
  if (jmax < 0 || jmax > kMaxHermiteOrder)
    throw std::domain_error("hermite_coefficients: jmax exceeds the order guard (30)");
  if (nodes < 4 * jmax)
    throw std::invalid_argument("hermite_coefficients: requires nodes >= 4*jmax");
  HermiteExpansion e;
  e.jmax = jmax;
  e.quadrature_nodes = nodes;
  e.coeffs = weighted_moments(G, jmax, nodes);
  for (double c : e.coeffs)
    if (!std::isfinite(c))
      throw std::runtime_error("hermite_coefficients: non-finite quadrature value (G not integrable?)");
  return e;
}

int hermite_rank(const TestFunction& G, int jmax, double rank_tol) {
  const HermiteExpansion e = hermite_coefficients(G, jmax, std::max(200, 4 * jmax));
  double cmax = 0.0;
  for (int j = 1; j <= jmax; ++j) cmax = std::max(cmax, std::abs(e.coeffs[j]));
  // Guard against quadrature dust: a function whose nonconstant coefficients
  // are all at rounding level has no detectable rank.
  if (cmax <= 1e-12 * std::max(1.0, std::abs(e.coeffs[0])))
    throw std::runtime_error("hermite_rank: no coefficient above threshold (rank undetected)");
  for (int j = 1; j <= jmax; ++j)
    if (std::abs(e.coeffs[j]) > rank_tol * cmax) return j;
  throw std::runtime_error("hermite_rank: no coefficient above threshold (rank undetected)");
}

double second_moment(const TestFunction& G, int nodes) {
  TestFunction g2;
  g2.family = TestFunction::Family::custom;
  g2.fn = [G](double x) {
    const double v = G(x);
    return v * v;
  };
  g2.breakpoints = G.breakpoints;
  const std::vector<double> mom = weighted_moments(g2, 0, nodes);
  if (!std::isfinite(mom[0]))
    throw std::runtime_error("second_moment: non-finite quadrature value");
  return mom[0];
}

double parseval_gap(const TestFunction& G, int jmax, int nodes) {
  const HermiteExpansion e = hermite_coefficients(G, jmax, nodes);
  double sum = 0.0;
  double factorial = 1.0;
  for (int j = 0; j <= jmax; ++j) {
    if (j > 0) factorial *= j;
    sum += e.coeffs[j] * e.coeffs[j] / factorial;
  }
  return std::abs(sum - second_moment(G, nodes));
}

McEstimate orthogonality_mc_check(const CovarianceModel& model, int m1, int m2,
                                  double r, long reps, std::uint64_t seed) {
  if (m1 < 0 || m1 > 6 || m2 < 0 || m2 > 6)
    throw std::invalid_argument("orthogonality_mc_check: orders must be in [0, 6]");
  if (reps < 10000)
    throw std::invalid_argument("orthogonality_mc_check: requires reps >= 1e4");
  const double rho = covariance_eval(model, r);
  if (std::abs(rho) > 1.0)
    throw std::runtime_error("orthogonality_mc_check: |B(r)| > 1 (invalid model)");
  const double ortho = std::sqrt(std::max(0.0, 1.0 - rho * rho));

  NormalStream rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < reps; ++i) {
    const double z1 = rng.next();
    const double z2 = rng.next();
    const double x = z1;
    const double y = rho * z1 + ortho * z2;
    const double v = hermite_eval(m1, x) * hermite_eval(m2, y);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / reps;
  const double var = std::max(0.0, sumsq / reps - mean * mean);
  return McEstimate{mean, std::sqrt(var / reps)};
}

}  // namespace lrf
