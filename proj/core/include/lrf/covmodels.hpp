#pragma once

#include <string>

#include "lrf/slowly_varying.hpp"

namespace lrf {

/// Isotropic correlation model with long-range tail r^{-alpha} L(r).
/// B(0) = 1 and |B| <= 1 hold for every family by construction.
struct CovarianceModel {
  enum class Family { cauchy, pure_power_tail, generic };

  Family family = Family::cauchy;
  int n = 2;           // dimension, <= 3
  double alpha = 1.0;  // long-range exponent, 0 < alpha < n
  SlowlyVarying L = SlowlyVarying::constant(1.0);

  // generic family: smooth even head on [0, head_radius], tail beyond.
  double head_radius = 0.0;
  double head_a = 0.0, head_b = 0.0;  // h(t) = 1 + a t + b t^2, t = (r/r0)^2

  /// B(r) = (1 + r^2)^{-alpha/2}; slowly varying factor is cauchy_factor(alpha).
  static CovarianceModel cauchy(int n, double alpha);
  /// B(r) = min(1, r^{-alpha} L(r)).
  static CovarianceModel pure_power_tail(int n, double alpha, SlowlyVarying L);
  /// B(r) = r^{-alpha} L(r) for r >= r0 with a monotone C^1 head on [0, r0].
  /// r0 = 0 picks the smallest radius at which the tail drops below 1/2.
  static CovarianceModel generic(int n, double alpha, SlowlyVarying L, double r0 = 0.0);

  std::string fingerprint() const;
};

/// Matching isotropic spectral density f(u) = c1(n,alpha) u^{alpha-n} L(1/u).
struct SpectralModel {
  int n = 2;
  double alpha = 1.0;
  SlowlyVarying L = SlowlyVarying::constant(1.0);
};

/// B(r). Throws std::domain_error for r < 0.
double covariance_eval(const CovarianceModel& model, double r);

/// c1(n, alpha) = Gamma((n-alpha)/2) / (2^alpha pi^{n/2} Gamma(alpha/2)).
double c1_constant(int n, double alpha);

/// f(||lambda||); throws std::domain_error at ||lambda|| = 0 (singular).
double spectral_density_eval(const SpectralModel& s, double lambda_norm);

/// Y_n(u) = 2^{(n-2)/2} Gamma(n/2) J_{(n-2)/2}(u) u^{(2-n)/2} for n in {1,2,3}:
/// cos(u), J_0(u), sin(u)/u.
double y_n_eval(int n, double u);

struct HankelGap {
  double gap;            // |B(r) - reconstruction|
  double reconstructed;  // truncated Y_n-transform of the density
  double tail_estimate;  // magnitude of the last oscillation lobe
};

/// Reconstructs B(r) from the spectral density through the Y_n transform,
/// truncated at `cutoff`, and reports the absolute gap. Diagnostic: the gap
/// is small only when (model, s) form an exact transform pair. `panel_budget`
/// caps the number of oscillation-resolving panels; if the cutoff requires
/// more, throws quadrature_failure carrying the tail estimate.
HankelGap hankel_consistency_gap(const CovarianceModel& model, const SpectralModel& s,
                                 double r, double cutoff, int panel_budget);

}  // namespace lrf
