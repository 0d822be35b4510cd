#include "lrf/slowly_varying.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrf {

SlowlyVarying SlowlyVarying::constant(double c) {
  if (c <= 0.0) throw std::domain_error("SlowlyVarying::constant: c must be positive");
  SlowlyVarying L;
  L.family = Family::constant;
  L.c = c;
  return L;
}

SlowlyVarying SlowlyVarying::log_shifted(double c, double s) {
  if (c <= 0.0 || s <= 1.0)
    throw std::domain_error("SlowlyVarying::log_shifted: requires c > 0, s > 1");
  SlowlyVarying L;
  L.family = Family::log_shifted;
  L.c = c;
  L.shift = s;
  return L;
}

SlowlyVarying SlowlyVarying::cauchy_factor(double alpha) {
  if (alpha <= 0.0) throw std::domain_error("SlowlyVarying::cauchy_factor: alpha > 0");
  SlowlyVarying L;
  L.family = Family::cauchy_factor;
  L.alpha = alpha;
  return L;
}

std::string SlowlyVarying::describe() const {
  std::ostringstream os;
  switch (family) {
    case Family::constant:
      os << "constant(" << c << ")";
      break;
    case Family::log_shifted:
      os << "log_shifted(" << c << "," << shift << ")";
      break;
    case Family::cauchy_factor:
      os << "cauchy_factor(" << alpha << ")";
      break;
  }
  return os.str();
}

double slowly_varying_eval(const SlowlyVarying& L, double r) {
  if (r < 0.0) throw std::domain_error("slowly_varying_eval: r must be nonnegative");
  switch (L.family) {
    case SlowlyVarying::Family::constant:
      return L.c;
    case SlowlyVarying::Family::log_shifted:
      return L.c * std::log(L.shift + r) / std::log(L.shift + 1.0);
    case SlowlyVarying::Family::cauchy_factor: {
      if (r == 0.0) return 1.0;  // convention
      const double r2 = r * r;
      return std::pow(r2 / (1.0 + r2), 0.5 * L.alpha);
    }
  }
  throw std::logic_error("slowly_varying_eval: unknown family");
}

}  // namespace lrf
