#pragma once

#include <vector>

#include "lrf/covmodels.hpp"

namespace lrf {

struct SpectralCell {
  std::vector<double> center;
  double volume;
  double mass;  // integral of the density over the cell (or center value x volume)
};

/// Uniform rectangular tiling of [-cutoff, cutoff]^n minus the origin cell,
/// enumerated over a half-space; the mirror cell of each representative is
/// implied by Hermitian symmetry. Cells in the two rings around the excluded
/// origin cell carry the cell-integrated mass, the rest use the center value.
struct SpectralDiscretization {
  int n = 1;
  double cutoff = 40.0;
  int cells_per_axis = 129;  // forced odd so an origin-centered cell exists
  bool origin_excluded = true;
  std::vector<SpectralCell> half_cells;

  /// Total density mass over the full (mirrored) cell union.
  double total_mass() const;
};

SpectralDiscretization make_spectral_discretization(const SpectralModel& s,
                                                    double cutoff, int cells_per_axis);

}  // namespace lrf
