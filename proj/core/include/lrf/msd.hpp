#pragma once

#include <functional>
#include <vector>

#include "lrf/covmodels.hpp"
#include "lrf/functionals.hpp"

namespace lrf {

/// Tensor midpoint quadrature parameters for the mean-square gap terms.
struct QuadSpec {
  int points_per_unit = 2;    // base midpoint cells per unit length per axis
  int diag_depth = 4;         // dyadic subdivision depth near the diagonal
  double diag_radius = 1.0;   // refinement is confined to pairs this close
  double admissibility = 2.0; // refine while dist < admissibility * diameter
};

struct MsdConfig {
  CovarianceModel model;
  WeightFunction g;
  int m = 1;
  std::vector<double> T;    // per-axis extents, >= 1
  QuadSpec quad;
  long mc_points = 1 << 17; // n = 3: quasi-random points for the d1 integral

  void validate() const;
};

struct MsdReport {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  double total = 0.0;        // d1 + d2 + d3, exact by construction
  double denominator = 1.0;  // Ttilde^{2n - alpha m} g^2(Ttilde 1) L^m(Ttilde)
  double ratio = 0.0;
  double error_estimate = 0.0;  // |total(p) - total(2p)|
};

/// m! times the integral over [0,T]^{2n} of g(x) g(x') B^m(||x - x'||),
/// tensor midpoint with dyadic near-diagonal subdivision.
double d1_term(const MsdConfig& cfg);

/// -2 m! times the integral over [0,T]^n of g(x) sum_i g(i) B^m(||i - x||),
/// exact sum over the integer lattice. Requires integer T.
double d2_term(const MsdConfig& cfg);

/// m! times the exact double lattice sum of g(i) g(i') B^m(||i - i'||).
/// Requires integer T.
double d3_term(const MsdConfig& cfg);

/// All three terms with a two-resolution error estimate; non-integer T is
/// handled by integrating the d1/d2 integrals over the full [0,T] box while
/// the lattice sums run over floor(T).
MsdReport total_gap(const MsdConfig& cfg);

/// Integral over [0,a]^n x [0,a]^n of g*(u) g*(v) ||u - v||^{-alpha m},
/// integrable singularity handled by dyadic subdivision with an exact
/// self-cell rule at the floor. Throws for alpha m >= n (divergent).
double l12_constant(int n, int m, double alpha, const WeightFunction& gstar,
                    const std::vector<double>& a, const QuadSpec& quad);

// Kernel-injected diagnostics (test fixtures and oracles). kernel(r) must be
// the full kernel including any Hermite power; the m! factor is not applied.
double d1_with_kernel(const std::function<double(double)>& kernel, const WeightFunction& g,
                      const std::vector<double>& T, const QuadSpec& quad);
double d2_with_kernel(const std::function<double(double)>& kernel, const WeightFunction& g,
                      const std::vector<double>& T, const QuadSpec& quad);
double d3_with_kernel(const std::function<double(double)>& kernel, const WeightFunction& g,
                      const std::vector<double>& T);

}  // namespace lrf
