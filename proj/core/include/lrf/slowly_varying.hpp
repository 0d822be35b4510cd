#pragma once

#include <string>

namespace lrf {

/// Slowly varying factor L(r): L(tr)/L(r) -> 1 as r -> infinity for all t > 0.
struct SlowlyVarying {
  enum class Family { constant, log_shifted, cauchy_factor };

  Family family = Family::constant;
  double c = 1.0;      // constant value / log_shifted scale
  double shift = 2.718281828459045;  // log_shifted shift s
  double alpha = 1.0;  // cauchy_factor exponent

  static SlowlyVarying constant(double c);
  /// c * log(s + r) / log(s + 1)
  static SlowlyVarying log_shifted(double c, double s);
  /// (r^2 / (1 + r^2))^{alpha/2}; value 1 at r = 0 by convention
  static SlowlyVarying cauchy_factor(double alpha);

  std::string describe() const;
};

/// Evaluate L at r >= 0. Throws std::domain_error for r < 0.
double slowly_varying_eval(const SlowlyVarying& L, double r);

}  // namespace lrf
