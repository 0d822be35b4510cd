#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lrf/covmodels.hpp"
#include "lrf/hermite.hpp"
#include "lrf/spectral_cells.hpp"

namespace lrf {

/// Multidimensional rectangle prod [a_l, b_l] with a_l < 0 < b_l.
struct RectDomain {
  int n = 1;
  std::vector<double> a;
  std::vector<double> b;

  RectDomain() = default;
  RectDomain(std::vector<double> a_, std::vector<double> b_);

  double volume() const;
  /// Largest edge extent max(b_l - a_l).
  double max_extent() const;
};

/// Fourier transform of the rectangle indicator: prod over axes of
/// (e^{i b_j x_j} - e^{i a_j x_j}) / (i x_j), with the continuous extension
/// (b_j - a_j) at x_j = 0.
std::complex<double> kernel_K_rect(const std::vector<double>& x, const RectDomain& dom);

/// Direct tensor quadrature of the defining integral over the rectangle.
std::complex<double> kernel_K_numeric(const std::vector<double>& x, const RectDomain& dom,
                                      int order = 32);

/// Truncated values of the singular spectral integral
///   int_{||lambda_i|| <= R} |K(lambda_1+...+lambda_kappa)|^2
///     prod ||lambda_i||^{-(n - tau_i)} dlambda
/// over the radius ladder; the caller inspects stabilization of increments.
/// kappa = 1 uses full radial quadrature, kappa = 2 a quasi-random rule in
/// the radially transformed coordinates.
std::vector<double> lemma1_integral(int n, int kappa, const std::vector<double>& tau,
                                    const RectDomain& dom, const std::vector<double>& R_ladder,
                                    long qmc_points = 1 << 16);

/// Variance of the kappa = 1 limit: c1(n, alpha) * int |K|^2 ||lambda||^{alpha - n},
/// radial-adaptive quadrature with geometric tail extrapolation.
double limit_variance_k1(int n, double alpha, const RectDomain& dom);

struct SampleSet {
  std::vector<double> values;
  std::string generator;
  std::uint64_t seed = 0;

  void write_csv(const std::string& path) const;
};

/// iid Gaussian draws with the kappa = 1 limit variance.
SampleSet sample_limit_k1(int n, double alpha, const RectDomain& dom, long nsamples,
                          std::uint64_t seed);

/// kappa = 2 Hermite-type (Rosenblatt-type) limit sampler: the spectrally
/// discretized symmetric kernel is assembled over half-space cell pairs into
/// a real quadratic form; each sample is sum mu_k (Z_k^2 - 1), where the -1
/// realizes the diagonal exclusion of the primed double Wiener-Ito integral.
class RosenblattSampler {
 public:
  RosenblattSampler(int n, double alpha, const RectDomain& dom,
                    const SpectralDiscretization& disc);

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  /// Var = 2 sum mu_k^2 (internal identity of the quadratic form).
  double variance() const;
  /// Third central moment = 8 sum mu_k^3.
  double third_moment() const;

  SampleSet sample(long nsamples, std::uint64_t seed) const;

 private:
  std::vector<double> eigenvalues_;
};

SampleSet sample_limit_k2(int n, double alpha, const RectDomain& dom,
                          const SpectralDiscretization& disc, long nsamples,
                          std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F1(x) - F2(x)|.
double ks_distance(const SampleSet& s1, const SampleSet& s2);

struct ConvergenceSpec {
  enum class Kind { k1_gaussian, k2_rosenblatt, theorem1_demo };

  Kind kind = Kind::k1_gaussian;
  CovarianceModel model;
  RectDomain dom;
  int m = 1;  // Hermite order; the rank kappa for theorem1_demo
  std::vector<double> T_ladder;
  long reps = 2000;
  std::uint64_t seed = 1;
  int q = 2;                  // integral refinement (theorem1_demo)
  long limit_samples = 20000;
  TestFunction G;             // theorem1_demo only
  double spectral_cutoff = 40.0;
  int spectral_cells = 128;
};

struct ConvergenceRow {
  double T = 0.0;
  long reps = 0;
  double ks = 0.0;
  double mean = 0.0, var = 0.0, skew = 0.0;
  std::uint64_t seed = 0;
};

/// For each T: simulates `reps` exact fields on the dilated rectangle's
/// lattice, forms the normalized additive functionals with g = 1 and the
/// normalizer T^{n - m alpha/2} L^{m/2}(T), and reports the KS distance to
/// the matching limit sample plus the first three sample moments. The
/// theorem1_demo kind instead compares the studentized weighted integral of
/// G against its leading Hermite term on the same realizations.
std::vector<ConvergenceRow> convergence_study(const ConvergenceSpec& spec);

}  // namespace lrf
