#include "lrf/special.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lrf {

namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kPi = 3.141592653589793238462643383279502884;

double lanczos_gamma(double x) {
  if (x < 0.5) {
    // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
    return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double j0_series(double x) {
  // J0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

double j0_asymptotic(double x) {
  // Hankel expansion: J0 = sqrt(2/(pi x)) [P cos chi - Q sin chi],
  // chi = x - pi/4, a_k = prod_{j<=k} -(2j-1)^2 / (k 8).
  // Asymptotic series: summed until terms stop decreasing.
  double p = 1.0, q = 0.0;
  double a = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 40; ++k) {
    const double d = 2.0 * k - 1.0;
    a *= -(d * d) / (8.0 * k);
    const double term = a / std::pow(x, k);
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    const int r = k % 4;
    // (-1)^{floor(k/2)} pattern split over P (even k) and Q (odd k).
    if (r == 0)
      p += term;
    else if (r == 1)
      q += term;
    else if (r == 2)
      p -= term;
    else
      q -= term;
  }
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma_fn: pole at non-positive integer");
  return lanczos_gamma(x);
}

double log_gamma(double x) {
  if (x <= 0.0) throw std::domain_error("log_gamma: requires x > 0");
  if (x < 1e2) return std::log(gamma_fn(x));
  // Direct Lanczos in log form avoids overflow for large arguments.
  const double z = x - 1.0;
  double a = kLanczos[0];
  const double t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 12.0) return j0_series(x);
  return j0_asymptotic(x);
}

}  // namespace lrf
