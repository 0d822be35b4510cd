#include "lrf/spectral_cells.hpp"

#include <cmath>
#include <stdexcept>

#include "lrf/quadrature.hpp"

namespace lrf {

namespace {

// Tensor GL16 integral of the density over a box not containing the origin.
double cell_mass(const SpectralModel& s, const std::vector<double>& lo,
                 const std::vector<double>& hi) {
  const int n = s.n;
  const quad::Rule& r = quad::gauss_legendre(16);
  double sum = 0.0;
  std::vector<int> idx(n, 0);
  std::vector<double> lambda(n);
  while (true) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      const double mid = 0.5 * (lo[d] + hi[d]);
      const double half = 0.5 * (hi[d] - lo[d]);
      lambda[d] = mid + half * r.nodes[idx[d]];
      w *= half * r.weights[idx[d]];
    }
    double norm2 = 0.0;
    for (int d = 0; d < n; ++d) norm2 += lambda[d] * lambda[d];
    sum += w * spectral_density_eval(s, std::sqrt(norm2));
    int d = 0;
    while (d < n && ++idx[d] == 16) idx[d++] = 0;
    if (d == n) break;
  }
  return sum;
}

}  // namespace

double SpectralDiscretization::total_mass() const {
  double m = 0.0;
  for (const SpectralCell& c : half_cells) m += c.mass;
  return 2.0 * m;
}

SpectralDiscretization make_spectral_discretization(const SpectralModel& s,
                                                    double cutoff, int cells_per_axis) {
  if (s.n < 1 || s.n > 3)
    throw std::invalid_argument("make_spectral_discretization: n in {1,2,3}");
  if (!(cutoff > 0.0)) throw std::invalid_argument("make_spectral_discretization: cutoff > 0");
  if (cells_per_axis < 16)
    throw std::invalid_argument("make_spectral_discretization: cells_per_axis >= 16");

  SpectralDiscretization disc;
  disc.n = s.n;
  disc.cutoff = cutoff;
  // Odd count puts one cell center exactly at the origin; that cell is
  // excluded because the density is singular there.
  disc.cells_per_axis = cells_per_axis | 1;
  disc.origin_excluded = true;

  const int n = s.n;
  const int c = disc.cells_per_axis;
  const int k_max = (c - 1) / 2;
  const double h = 2.0 * cutoff / c;
  const double vol = std::pow(h, n);

  // Lexicographic enumeration over the full index box [-k_max, k_max]^n.
  std::vector<int> k(n);
  std::vector<double> lo(n), hi(n);
  long total_cells = 1;
  for (int d = 0; d < n; ++d) total_cells *= c;

  for (long flat = 0; flat < total_cells; ++flat) {
    long rest = flat;
    for (int d = n - 1; d >= 0; --d) {
      k[d] = static_cast<int>(rest % c) - k_max;
      rest /= c;
    }
    // Half-space representative: first nonzero index positive.
    int first_nonzero = 0;
    for (int d = 0; d < n; ++d) {
      if (k[d] != 0) {
        first_nonzero = k[d];
        break;
      }
    }
    if (first_nonzero <= 0) continue;  // mirror cell or the excluded origin

    SpectralCell cell;
    cell.center.resize(n);
    int ring = 0;
    for (int d = 0; d < n; ++d) {
      cell.center[d] = k[d] * h;
      ring = std::max(ring, std::abs(k[d]));
    }
    cell.volume = vol;
    if (ring <= 2) {
      for (int d = 0; d < n; ++d) {
        lo[d] = cell.center[d] - 0.5 * h;
        hi[d] = cell.center[d] + 0.5 * h;
      }
      cell.mass = cell_mass(s, lo, hi);
    } else {
      double norm2 = 0.0;
      for (int d = 0; d < n; ++d) norm2 += cell.center[d] * cell.center[d];
      cell.mass = spectral_density_eval(s, std::sqrt(norm2)) * vol;
    }
    if (!std::isfinite(cell.mass))
      throw std::runtime_error("make_spectral_discretization: non-finite cell mass");
    disc.half_cells.push_back(std::move(cell));
  }
  return disc;
}

}  // namespace lrf
