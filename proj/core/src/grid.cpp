#include "lrf/grid.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lrf {

long GridSpec::total() const {
  long t = 1;
  for (long c : counts) t *= c;
  return t;
}

std::vector<double> GridSpec::point(long flat) const {
  std::vector<double> x(n);
  for (int d = n - 1; d >= 0; --d) {
    const long i = flat % counts[d];
    flat /= counts[d];
    x[d] = origin[d] + i * spacing[d];
  }
  return x;
}

long GridSpec::flat_index(const std::vector<long>& idx) const {
  long flat = 0;
  for (int d = 0; d < n; ++d) {
    if (idx[d] < 0 || idx[d] >= counts[d])
      throw std::out_of_range("GridSpec::flat_index: index outside grid");
    flat = flat * counts[d] + idx[d];
  }
  return flat;
}

GridSpec GridSpec::integer_lattice(const std::vector<long>& extents) {
  GridSpec g;
  g.n = static_cast<int>(extents.size());
  g.counts = extents;
  g.spacing.assign(g.n, 1.0);
  g.origin.assign(g.n, 0.0);
  g.validate();
  return g;
}

GridSpec GridSpec::integer_box(const std::vector<long>& lo, const std::vector<long>& hi) {
  GridSpec g;
  g.n = static_cast<int>(lo.size());
  g.counts.resize(g.n);
  g.spacing.assign(g.n, 1.0);
  g.origin.resize(g.n);
  for (int d = 0; d < g.n; ++d) {
    if (hi[d] < lo[d]) throw std::invalid_argument("GridSpec::integer_box: hi < lo");
    g.counts[d] = hi[d] - lo[d] + 1;
    g.origin[d] = static_cast<double>(lo[d]);
  }
  g.validate();
  return g;
}

GridSpec GridSpec::midpoint_grid(const std::vector<double>& T, int q) {
  std::vector<double> lo(T.size(), 0.0);
  return midpoint_box(lo, T, q);
}

GridSpec GridSpec::midpoint_box(const std::vector<double>& lo,
                                const std::vector<double>& hi, int q) {
  if (q < 1) throw std::invalid_argument("GridSpec::midpoint_box: q >= 1");
  GridSpec g;
  g.n = static_cast<int>(lo.size());
  g.counts.resize(g.n);
  g.spacing.assign(g.n, 1.0 / q);
  g.origin.resize(g.n);
  for (int d = 0; d < g.n; ++d) {
    const double cells = (hi[d] - lo[d]) * q;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 || rounded < 1.0)
      throw std::invalid_argument("GridSpec::midpoint_box: (hi-lo)*q must be a positive integer");
    g.counts[d] = static_cast<long>(rounded);
    g.origin[d] = lo[d] + 0.5 / q;
  }
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (n < 1 || static_cast<int>(counts.size()) != n ||
      static_cast<int>(spacing.size()) != n || static_cast<int>(origin.size()) != n)
    throw std::invalid_argument("GridSpec: inconsistent dimensions");
  for (int d = 0; d < n; ++d) {
    if (counts[d] < 1) throw std::invalid_argument("GridSpec: counts must be >= 1");
    if (!(spacing[d] > 0.0)) throw std::invalid_argument("GridSpec: spacing must be > 0");
  }
}

FieldSample FieldSample::injected(GridSpec grid, std::vector<double> values) {
  grid.validate();
  if (static_cast<long>(values.size()) != grid.total())
    throw std::invalid_argument("FieldSample::injected: value count does not match grid");
  FieldSample f;
  f.grid = std::move(grid);
  f.values = std::move(values);
  f.method = Method::injected;
  return f;
}

void FieldSample::write_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("FieldSample::write_csv: cannot open " + path);
  std::fprintf(fp, "# n=%d counts=", grid.n);
  for (int d = 0; d < grid.n; ++d)
    std::fprintf(fp, "%s%ld", d ? "x" : "", grid.counts[d]);
  std::fprintf(fp, " spacing=");
  for (int d = 0; d < grid.n; ++d)
    std::fprintf(fp, "%s%.17g", d ? "," : "", grid.spacing[d]);
  std::fprintf(fp, " origin=");
  for (int d = 0; d < grid.n; ++d)
    std::fprintf(fp, "%s%.17g", d ? "," : "", grid.origin[d]);
  std::fprintf(fp, " seed=%llu\n", static_cast<unsigned long long>(seed));
  for (long i = 0; i < grid.total(); ++i) {
    const std::vector<double> x = grid.point(i);
    for (int d = 0; d < grid.n; ++d) std::fprintf(fp, "%.17g,", x[d]);
    std::fprintf(fp, "%.17g\n", values[i]);
  }
  std::fclose(fp);
}

}  // namespace lrf
