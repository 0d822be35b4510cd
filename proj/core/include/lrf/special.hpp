#pragma once

namespace lrf {

/// Gamma function, Lanczos approximation (g = 7, 9 terms).
/// Relative accuracy better than 1e-13 over the range used here.
double gamma_fn(double x);

/// Natural log of |Gamma(x)| for x > 0.
double log_gamma(double x);

/// Bessel function of the first kind, order zero.
/// Power series for |x| < 12, Hankel asymptotic expansion beyond;
/// absolute accuracy ~1e-10 on [0, 1e3].
double bessel_j0(double x);

}  // namespace lrf
