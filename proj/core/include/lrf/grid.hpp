#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrf {

/// Rectangular lattice: per-axis counts, spacing and origin.
struct GridSpec {
  int n = 1;
  std::vector<long> counts;
  std::vector<double> spacing;
  std::vector<double> origin;

  long total() const;
  /// Coordinates of the flat (row-major) index.
  std::vector<double> point(long flat) const;
  /// Row-major flat index from per-axis indices.
  long flat_index(const std::vector<long>& idx) const;

  /// spacing 1, origin 0: points {0, ..., extents_l - 1} per axis.
  static GridSpec integer_lattice(const std::vector<long>& extents);
  /// spacing 1, integer points from lo_l to hi_l inclusive.
  static GridSpec integer_box(const std::vector<long>& lo, const std::vector<long>& hi);
  /// Midpoint refinement of [0, T_l] with spacing 1/q (T_l * q must be integral).
  static GridSpec midpoint_grid(const std::vector<double>& T, int q);
  /// Midpoint refinement of [lo_l, hi_l] with spacing 1/q.
  static GridSpec midpoint_box(const std::vector<double>& lo,
                               const std::vector<double>& hi, int q);

  void validate() const;
};

struct FieldSample {
  enum class Method { exact_factorization, spectral, injected };

  GridSpec grid;
  std::vector<double> values;  // row-major
  Method method = Method::injected;
  std::uint64_t seed = 0;
  std::string model_fingerprint;
  double jitter_used = 0.0;

  static FieldSample injected(GridSpec grid, std::vector<double> values);

  /// Header line with grid metadata, then one "x1,...,xn,value" row per point.
  void write_csv(const std::string& path) const;
};

}  // namespace lrf
