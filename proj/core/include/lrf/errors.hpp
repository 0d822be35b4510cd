#pragma once

#include <stdexcept>
#include <string>

namespace lrf {

/// Thrown when an adaptive or truncated quadrature cannot meet its budget.
/// Carries the residual (tail) estimate at the point of failure.
class quadrature_failure : public std::runtime_error {
 public:
  quadrature_failure(const std::string& what, double residual_estimate)
      : std::runtime_error(what), residual_(residual_estimate) {}

  double residual_estimate() const { return residual_; }

 private:
  double residual_;
};

/// Parameter combination leaves the long-range dependence regime
/// (alpha * m >= n), where the normalized variance is unbounded.
class long_range_violation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Covariance matrix could not be factorized even after the jitter schedule.
class non_psd_covariance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrf
