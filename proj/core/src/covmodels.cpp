#include "lrf/covmodels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lrf/errors.hpp"
#include "lrf/quadrature.hpp"
#include "lrf/special.hpp"

namespace lrf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double tail_value(double alpha, const SlowlyVarying& L, double r) {
  return std::pow(r, -alpha) * slowly_varying_eval(L, r);
}

void check_dim_alpha(int n, double alpha) {
  if (n < 1 || n > 3) throw std::domain_error("CovarianceModel: n must be in {1,2,3}");
  if (!(alpha > 0.0 && alpha < n))
    throw std::domain_error("CovarianceModel: alpha must satisfy 0 < alpha < n");
}

}  // namespace

CovarianceModel CovarianceModel::cauchy(int n, double alpha) {
  check_dim_alpha(n, alpha);
  CovarianceModel m;
  m.family = Family::cauchy;
  m.n = n;
  m.alpha = alpha;
  m.L = SlowlyVarying::cauchy_factor(alpha);
  return m;
}

CovarianceModel CovarianceModel::pure_power_tail(int n, double alpha, SlowlyVarying L) {
  check_dim_alpha(n, alpha);
  CovarianceModel m;
  m.family = Family::pure_power_tail;
  m.n = n;
  m.alpha = alpha;
  m.L = L;
  return m;
}

CovarianceModel CovarianceModel::generic(int n, double alpha, SlowlyVarying L, double r0) {
  check_dim_alpha(n, alpha);
  CovarianceModel m;
  m.family = Family::generic;
  m.n = n;
  m.alpha = alpha;
  m.L = L;

  // The head h(t) = 1 + a t + b t^2 in t = (r/r0)^2 interpolates value and
  // slope of the tail at r0. It is monotone non-increasing iff a <= 0 and
  // a + 2b <= 0, which holds once the tail has dropped far enough below 1.
  double radius = r0;
  if (radius <= 0.0) {
    radius = 1.0;
    while (tail_value(alpha, L, radius) > 0.5 && radius < 1e6) radius *= 2.0;
  }
  for (int attempt = 0; attempt < 60; ++attempt) {
    const double v0 = tail_value(alpha, L, radius);
    const double h = 1e-6 * radius;
    const double v0p = (tail_value(alpha, L, radius + h) - tail_value(alpha, L, radius - h)) / (2.0 * h);
    if (v0 < 1.0) {
      const double b = 0.5 * v0p * radius - (v0 - 1.0);
      const double a = (v0 - 1.0) - b;
      if (a <= 0.0 && a + 2.0 * b <= 0.0) {
        m.head_radius = radius;
        m.head_a = a;
        m.head_b = b;
        return m;
      }
    }
    radius *= 2.0;
  }
  throw std::domain_error("CovarianceModel::generic: no bounded monotone head exists for this (alpha, L)");
}

std::string CovarianceModel::fingerprint() const {
  std::ostringstream os;
  switch (family) {
    case Family::cauchy:
      os << "cauchy";
      break;
    case Family::pure_power_tail:
      os << "pure_power_tail";
      break;
    case Family::generic:
      os << "generic(r0=" << head_radius << ")";
      break;
  }
  os << ";n=" << n << ";alpha=" << alpha << ";L=" << L.describe();
  return os.str();
}

double covariance_eval(const CovarianceModel& model, double r) {
  if (r < 0.0) throw std::domain_error("covariance_eval: r must be nonnegative");
  switch (model.family) {
    case CovarianceModel::Family::cauchy:
      return std::pow(1.0 + r * r, -0.5 * model.alpha);
    case CovarianceModel::Family::pure_power_tail: {
      if (r == 0.0) return 1.0;
      return std::min(1.0, tail_value(model.alpha, model.L, r));
    }
    case CovarianceModel::Family::generic: {
      if (r >= model.head_radius) return tail_value(model.alpha, model.L, r);
      const double t = (r / model.head_radius) * (r / model.head_radius);
      return 1.0 + model.head_a * t + model.head_b * t * t;
    }
  }
  throw std::logic_error("covariance_eval: unknown family");
}

double c1_constant(int n, double alpha) {
  if (n < 1) throw std::domain_error("c1_constant: n must be positive");
  if (!(alpha > 0.0 && alpha < n))
    throw std::domain_error("c1_constant: alpha must satisfy 0 < alpha < n (Gamma pole)");
  return gamma_fn(0.5 * (n - alpha)) /
         (std::pow(2.0, alpha) * std::pow(kPi, 0.5 * n) * gamma_fn(0.5 * alpha));
}

double spectral_density_eval(const SpectralModel& s, double lambda_norm) {
  if (lambda_norm <= 0.0)
    throw std::domain_error("spectral_density_eval: density is singular at 0");
  return c1_constant(s.n, s.alpha) * std::pow(lambda_norm, s.alpha - s.n) *
         slowly_varying_eval(s.L, 1.0 / lambda_norm);
}

double y_n_eval(int n, double u) {
  if (u < 0.0) throw std::domain_error("y_n_eval: u must be nonnegative");
  switch (n) {
    case 1:
      return std::cos(u);
    case 2:
      return bessel_j0(u);
    case 3:
      return u == 0.0 ? 1.0 : std::sin(u) / u;
    default:
      throw std::domain_error("y_n_eval: unsupported dimension (n in {1,2,3})");
  }
}

HankelGap hankel_consistency_gap(const CovarianceModel& model, const SpectralModel& s,
                                 double r, double cutoff, int panel_budget) {
  if (model.n != s.n || model.alpha != s.alpha)
    throw std::invalid_argument("hankel_consistency_gap: model and density must share (n, alpha)");
  if (model.n > 2)
    throw std::domain_error("hankel_consistency_gap: supported for n in {1,2}");
  if (r <= 0.0 || cutoff <= 0.0)
    throw std::domain_error("hankel_consistency_gap: r and cutoff must be positive");

  const int n = model.n;
  const double alpha = model.alpha;
  const double front = 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);

  auto integrand = [&](double u) {
    return y_n_eval(n, r * u) * front * std::pow(u, n - 1.0) *
           spectral_density_eval(s, u);
  };

  // [0, u0]: absorb the u^{alpha-1} singularity with u = t^{1/alpha}.
  const double u0 = std::min(1.0, cutoff);
  auto smooth_part = [&](double t) {
    const double u = std::pow(t, 1.0 / alpha);
    return y_n_eval(n, r * u) * front * slowly_varying_eval(s.L, 1.0 / u) / alpha;
  };
  double value = c1_constant(n, alpha) *
                 quad::gl_composite(smooth_part, 0.0, std::pow(u0, alpha), 8, 32);

  double tail_estimate = 0.0;
  if (cutoff > u0) {
    // Dyadic spans out to the cutoff, each subdivided into panels of
    // roughly a half oscillation period pi/r.
    const double period = kPi / r;
    long total_panels = 0;
    for (double lo = u0; lo < cutoff; lo *= 2.0) {
      const double hi = std::min(2.0 * lo, cutoff);
      total_panels += std::max<long>(1, static_cast<long>(std::ceil((hi - lo) / period)));
    }
    if (total_panels > panel_budget) {
      const double residual = std::abs(integrand(cutoff)) * std::min(period, cutoff);
      throw quadrature_failure("hankel_consistency_gap: oscillation panel budget exceeded", residual);
    }
    for (double lo = u0; lo < cutoff; lo *= 2.0) {
      const double hi = std::min(2.0 * lo, cutoff);
      const int panels = std::max<int>(1, static_cast<int>(std::ceil((hi - lo) / period)));
      value += quad::gl_composite(integrand, lo, hi, panels, 16);
    }
    // One-lobe bound on the truncated oscillatory tail.
    tail_estimate = std::abs(integrand(cutoff)) * std::min(period, cutoff);
  }

  const double target = covariance_eval(model, r);
  return HankelGap{std::abs(target - value), value, tail_estimate};
}

}  // namespace lrf
