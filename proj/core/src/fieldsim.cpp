#include "lrf/fieldsim.hpp"

#include <cmath>
#include <stdexcept>

#include "lrf/errors.hpp"
#include "lrf/rng.hpp"

namespace lrf {

ExactFieldSimulator::ExactFieldSimulator(const CovarianceModel& model, GridSpec grid)
    : grid_(std::move(grid)), fingerprint_(model.fingerprint()) {
  grid_.validate();
  const long npts = grid_.total();
  if (npts > kMaxExactPoints)
    throw std::invalid_argument(
        "ExactFieldSimulator: grid too large for exact factorization; use the spectral method");
  if (grid_.n != model.n)
    throw std::invalid_argument("ExactFieldSimulator: grid and model dimension mismatch");

  Eigen::MatrixXd cov(npts, npts);
  std::vector<std::vector<double>> pts(npts);
  for (long i = 0; i < npts; ++i) pts[i] = grid_.point(i);
  for (long i = 0; i < npts; ++i) {
    cov(i, i) = 1.0;
    for (long j = 0; j < i; ++j) {
      double d2 = 0.0;
      for (int d = 0; d < grid_.n; ++d) {
        const double diff = pts[i][d] - pts[j][d];
        d2 += diff * diff;
      }
      const double b = covariance_eval(model, std::sqrt(d2));
      cov(i, j) = b;
      cov(j, i) = b;
    }
  }

  const double jitters[] = {0.0, 1e-12, 1e-10, 1e-8};
  for (double jit : jitters) {
    Eigen::MatrixXd trial = cov;
    if (jit > 0.0) trial.diagonal().array() += jit;
    Eigen::LLT<Eigen::MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = jit;
      return;
    }
  }
  throw non_psd_covariance(
      "ExactFieldSimulator: covariance matrix not positive definite after jitter schedule");
}

FieldSample ExactFieldSimulator::sample(std::uint64_t seed, std::uint64_t stream) const {
  const long npts = grid_.total();
  NormalStream rng(seed, stream);
  Eigen::VectorXd z(npts);
  for (long i = 0; i < npts; ++i) z(i) = rng.next();
  Eigen::VectorXd v = chol_ * z;

  FieldSample f;
  f.grid = grid_;
  f.values.assign(v.data(), v.data() + npts);
  f.method = FieldSample::Method::exact_factorization;
  f.seed = seed;
  f.model_fingerprint = fingerprint_;
  f.jitter_used = jitter_;
  return f;
}

FieldSample simulate_field_exact(const CovarianceModel& model, const GridSpec& grid,
                                 std::uint64_t seed) {
  return ExactFieldSimulator(model, grid).sample(seed);
}

FieldSample simulate_field_spectral(const SpectralDiscretization& disc, const GridSpec& grid,
                                    std::uint64_t seed) {
  grid.validate();
  if (grid.n != disc.n)
    throw std::invalid_argument("simulate_field_spectral: grid and discretization dimension mismatch");

  const long npts = grid.total();
  const std::size_t ncells = disc.half_cells.size();

  // One (A, B) pair per half-space cell, in the fixed enumeration order.
  std::vector<double> amp_a(ncells), amp_b(ncells);
  NormalStream rng(seed);
  for (std::size_t c = 0; c < ncells; ++c) {
    const double amp = std::sqrt(2.0 * disc.half_cells[c].mass);
    if (!std::isfinite(amp))
      throw std::runtime_error("simulate_field_spectral: non-finite cell amplitude");
    amp_a[c] = amp * rng.next();
    amp_b[c] = amp * rng.next();
  }

  FieldSample f;
  f.grid = grid;
  f.values.resize(npts);
  f.method = FieldSample::Method::spectral;
  f.seed = seed;

  for (long i = 0; i < npts; ++i) {
    const std::vector<double> pt = grid.point(i);
    double v = 0.0;
    for (std::size_t c = 0; c < ncells; ++c) {
      const SpectralCell& cell = disc.half_cells[c];
      double phase = 0.0;
      for (int d = 0; d < grid.n; ++d) phase += cell.center[d] * pt[d];
      v += amp_a[c] * std::cos(phase) + amp_b[c] * std::sin(phase);
    }
    f.values[i] = v;
  }
  return f;
}

FieldSample simulate_field_spectral(const SpectralModel& s, const GridSpec& grid,
                                    std::uint64_t seed, double cutoff, int cells_per_axis) {
  const SpectralDiscretization disc = make_spectral_discretization(s, cutoff, cells_per_axis);
  FieldSample f = simulate_field_spectral(disc, grid, seed);
  CovarianceModel tag;  // fingerprint only
  tag.n = s.n;
  tag.alpha = s.alpha;
  tag.L = s.L;
  f.model_fingerprint = "spectral;" + tag.fingerprint();
  return f;
}

CovEstimate empirical_covariance(const std::vector<FieldSample>& samples,
                                 const std::vector<long>& lag) {
  if (samples.size() < 30)
    throw std::invalid_argument("empirical_covariance: requires at least 30 samples");
  const GridSpec& g = samples.front().grid;
  if (static_cast<int>(lag.size()) != g.n)
    throw std::invalid_argument("empirical_covariance: lag dimension mismatch");
  for (int d = 0; d < g.n; ++d)
    if (std::abs(lag[d]) >= g.counts[d])
      throw std::invalid_argument("empirical_covariance: lag outside grid");

  double sum = 0.0, sumsq = 0.0;
  const long reps = static_cast<long>(samples.size());
  std::vector<long> idx(g.n), jdx(g.n);
  for (const FieldSample& f : samples) {
    if (f.grid.total() != g.total())
      throw std::invalid_argument("empirical_covariance: samples on different grids");
    double acc = 0.0;
    long pairs = 0;
    // Iterate base points such that base + lag stays inside the grid.
    std::vector<long> lo(g.n), hi(g.n);
    for (int d = 0; d < g.n; ++d) {
      lo[d] = std::max<long>(0, -lag[d]);
      hi[d] = std::min(g.counts[d], g.counts[d] - lag[d]);
    }
    std::fill(idx.begin(), idx.end(), 0);
    std::vector<long> cur(lo);
    while (true) {
      for (int d = 0; d < g.n; ++d) jdx[d] = cur[d] + lag[d];
      acc += f.values[g.flat_index(cur)] * f.values[g.flat_index(jdx)];
      ++pairs;
      int d = g.n - 1;
      while (d >= 0) {
        if (++cur[d] < hi[d]) break;
        cur[d] = lo[d];
        --d;
      }
      if (d < 0) break;
    }
    const double rep_mean = acc / pairs;
    sum += rep_mean;
    sumsq += rep_mean * rep_mean;
  }
  const double mean = sum / reps;
  const double var = std::max(0.0, sumsq / reps - mean * mean);
  return CovEstimate{mean, std::sqrt(var / reps)};
}

}  // namespace lrf
