#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lrf/covmodels.hpp"
#include "lrf/grid.hpp"
#include "lrf/spectral_cells.hpp"

namespace lrf {

inline constexpr long kMaxExactPoints = 8192;

/// Exact Gaussian sampler for a fixed (model, grid): factorizes the
/// covariance matrix [B(||x_i - x_j||)] once and draws replicates cheaply.
/// Jitter schedule 1e-12, 1e-10, 1e-8 on the diagonal before giving up.
class ExactFieldSimulator {
 public:
  ExactFieldSimulator(const CovarianceModel& model, GridSpec grid);

  FieldSample sample(std::uint64_t seed, std::uint64_t stream = 0) const;

  double jitter_used() const { return jitter_; }
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  Eigen::MatrixXd chol_;  // lower factor
  double jitter_ = 0.0;
  std::string fingerprint_;
};

/// One-shot exact simulation; throws for grids over kMaxExactPoints.
FieldSample simulate_field_exact(const CovarianceModel& model, const GridSpec& grid,
                                 std::uint64_t seed);

/// Spectral synthesis: xi(x) = sum over half-space cells of
/// sqrt(2 mass_c) (A_c cos<lambda_c, x> + B_c sin<lambda_c, x>) with iid
/// standard normal A, B. Gaussian, zero mean, covariance converging to the
/// model's as cutoff and resolution grow.
FieldSample simulate_field_spectral(const SpectralModel& s, const GridSpec& grid,
                                    std::uint64_t seed, double cutoff, int cells_per_axis);

/// Same, reusing a prebuilt discretization.
FieldSample simulate_field_spectral(const SpectralDiscretization& disc, const GridSpec& grid,
                                    std::uint64_t seed);

struct CovEstimate {
  double estimate;
  double stderr_;
};

/// Average of xi(x) xi(x + lag) over all replicates and in-grid pairs;
/// standard error across replicates.
CovEstimate empirical_covariance(const std::vector<FieldSample>& samples,
                                 const std::vector<long>& lag);

}  // namespace lrf
