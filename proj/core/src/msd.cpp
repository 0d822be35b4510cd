#include "lrf/msd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrf/errors.hpp"
#include "lrf/parallel.hpp"
#include "lrf/quadrature.hpp"

namespace lrf {

namespace {

constexpr int kMaxDim = 3;

struct BoxN {
  double lo[kMaxDim];
  double hi[kMaxDim];
};

inline double box_dist2(const BoxN& a, const BoxN& b, int n) {
  double d2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const double gap = std::max(0.0, std::max(a.lo[d] - b.hi[d], b.lo[d] - a.hi[d]));
    d2 += gap * gap;
  }
  return d2;
}

inline double box_diam2(const BoxN& a, int n) {
  double d2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const double e = a.hi[d] - a.lo[d];
    d2 += e * e;
  }
  return d2;
}

inline double box_volume(const BoxN& a, int n) {
  double v = 1.0;
  for (int d = 0; d < n; ++d) v *= a.hi[d] - a.lo[d];
  return v;
}

inline bool same_box(const BoxN& a, const BoxN& b, int n) {
  for (int d = 0; d < n; ++d)
    if (a.lo[d] != b.lo[d] || a.hi[d] != b.hi[d]) return false;
  return true;
}

// Rule for the floor-level pair of identical cells. Bounded kernels use the
// midpoint (r = 0); the pure-power kernel r^{-s} of l12 uses the exact
// self-interaction constant kappa_n(s) scaled to the cell.
struct DiagonalRule {
  bool power_kernel = false;
  double s = 0.0;      // exponent of the pure power kernel
  double kappa = 0.0;  // diagonal_cell_constant(n, s)
};

struct EngineSpec {
  int n = 1;
  int max_depth = 4;
  double diag_radius2 = 1.0;
  double adm2 = 4.0;  // admissibility^2
  DiagonalRule diagonal;
};

template <class Kernel, class Weight>
double pair_integral(const BoxN& A, const BoxN& B, const Kernel& K, const Weight& g,
                     const EngineSpec& es, int depth) {
  const int n = es.n;
  const double d2 = box_dist2(A, B, n);
  const double diam2 = std::max(box_diam2(A, n), box_diam2(B, n));
  if (depth < es.max_depth && d2 < es.diag_radius2 && d2 < es.adm2 * diam2) {
    BoxN ca, cb;
    double sum = 0.0;
    const int parts = 1 << n;
    for (int i = 0; i < parts; ++i) {
      for (int d = 0; d < n; ++d) {
        const double mid = 0.5 * (A.lo[d] + A.hi[d]);
        if (i & (1 << d)) {
          ca.lo[d] = mid;
          ca.hi[d] = A.hi[d];
        } else {
          ca.lo[d] = A.lo[d];
          ca.hi[d] = mid;
        }
      }
      for (int j = 0; j < parts; ++j) {
        for (int d = 0; d < n; ++d) {
          const double mid = 0.5 * (B.lo[d] + B.hi[d]);
          if (j & (1 << d)) {
            cb.lo[d] = mid;
            cb.hi[d] = B.hi[d];
          } else {
            cb.lo[d] = B.lo[d];
            cb.hi[d] = mid;
          }
        }
        sum += pair_integral(ca, cb, K, g, es, depth + 1);
      }
    }
    return sum;
  }

  double ma[kMaxDim] = {0.0, 0.0, 0.0}, mb[kMaxDim] = {0.0, 0.0, 0.0};
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) {
    ma[d] = 0.5 * (A.lo[d] + A.hi[d]);
    mb[d] = 0.5 * (B.lo[d] + B.hi[d]);
    const double diff = ma[d] - mb[d];
    r2 += diff * diff;
  }
  const double w = g(ma, n) * g(mb, n);
  if (es.diagonal.power_kernel && same_box(A, B, n)) {
    // exact for a cube; anisotropic cells use the geometric-mean edge
    const double h_eff = std::pow(box_volume(A, n), 1.0 / n);
    return w * es.diagonal.kappa * std::pow(h_eff, 2.0 * n - es.diagonal.s);
  }
  return w * K(std::sqrt(r2)) * box_volume(A, n) * box_volume(B, n);
}

template <class Kernel, class Weight>
double point_box_integral(const BoxN& A, const double* pt, double pt_weight,
                          const Kernel& K, const Weight& g, const EngineSpec& es,
                          int depth) {
  const int n = es.n;
  double d2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const double gap = std::max(0.0, std::max(A.lo[d] - pt[d], pt[d] - A.hi[d]));
    d2 += gap * gap;
  }
  if (depth < es.max_depth && d2 < es.diag_radius2 && d2 < es.adm2 * box_diam2(A, n)) {
    BoxN ca;
    double sum = 0.0;
    const int parts = 1 << n;
    for (int i = 0; i < parts; ++i) {
      for (int d = 0; d < n; ++d) {
        const double mid = 0.5 * (A.lo[d] + A.hi[d]);
        if (i & (1 << d)) {
          ca.lo[d] = mid;
          ca.hi[d] = A.hi[d];
        } else {
          ca.lo[d] = A.lo[d];
          ca.hi[d] = mid;
        }
      }
      sum += point_box_integral(ca, pt, pt_weight, K, g, es, depth + 1);
    }
    return sum;
  }
  double ma[kMaxDim] = {0.0, 0.0, 0.0};
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) {
    ma[d] = 0.5 * (A.lo[d] + A.hi[d]);
    const double diff = ma[d] - pt[d];
    r2 += diff * diff;
  }
  return g(ma, n) * pt_weight * K(std::sqrt(r2)) * box_volume(A, n);
}

// Per-axis base cells of [0, T] with p midpoint cells per unit; the last
// cell may be partial when T p is not integral.
std::vector<std::pair<double, double>> axis_cells(double T, int p) {
  std::vector<std::pair<double, double>> cells;
  const double h = 1.0 / p;
  const long full = static_cast<long>(std::floor(T * p + 1e-12));
  cells.reserve(full + 1);
  for (long j = 0; j < full; ++j) cells.emplace_back(j * h, (j + 1) * h);
  if (full * h < T - 1e-12) cells.emplace_back(full * h, T);
  return cells;
}

struct CellGrid {
  int n;
  std::vector<std::vector<std::pair<double, double>>> axes;
  long total;

  explicit CellGrid(const std::vector<double>& T, int p) {
    n = static_cast<int>(T.size());
    total = 1;
    for (double t : T) {
      axes.push_back(axis_cells(t, p));
      total *= static_cast<long>(axes.back().size());
    }
  }

  BoxN box(long flat) const {
    BoxN b;
    for (int d = n - 1; d >= 0; --d) {
      const long c = static_cast<long>(axes[d].size());
      const long i = flat % c;
      flat /= c;
      b.lo[d] = axes[d][i].first;
      b.hi[d] = axes[d][i].second;
    }
    return b;
  }
};

struct LatticePoints {
  int n;
  std::vector<long> extents;
  long total;

  explicit LatticePoints(const std::vector<double>& T) {
    n = static_cast<int>(T.size());
    total = 1;
    for (double t : T) {
      extents.push_back(static_cast<long>(std::floor(t + 1e-12)));
      total *= extents.back();
    }
  }

  void point(long flat, double* out) const {
    for (int d = n - 1; d >= 0; --d) {
      out[d] = static_cast<double>(flat % extents[d]);
      flat /= extents[d];
    }
  }
};

struct RawWeight {
  const WeightFunction* g;
  double operator()(const double* t, int n) const { return g->eval_raw(t, n); }
};

// B^m fast path; the Cauchy family folds the Hermite power into the exponent.
struct CovPowKernel {
  const CovarianceModel* model;
  int m;
  bool cauchy;
  double cauchy_exp;

  CovPowKernel(const CovarianceModel& mod, int order)
      : model(&mod),
        m(order),
        cauchy(mod.family == CovarianceModel::Family::cauchy),
        cauchy_exp(-0.5 * mod.alpha * order) {}

  double operator()(double r) const {
    if (cauchy) return std::pow(1.0 + r * r, cauchy_exp);
    const double b = covariance_eval(*model, r);
    double v = b;
    for (int k = 1; k < m; ++k) v *= b;
    return v;
  }
};

EngineSpec engine_spec(int n, const QuadSpec& quad) {
  EngineSpec es;
  es.n = n;
  es.max_depth = quad.diag_depth;
  es.diag_radius2 = quad.diag_radius * quad.diag_radius;
  es.adm2 = quad.admissibility * quad.admissibility;
  return es;
}

template <class Kernel, class Weight>
double d1_engine(const Kernel& K, const Weight& g, const std::vector<double>& T,
                 const QuadSpec& quad, const DiagonalRule& diagonal) {
  const int n = static_cast<int>(T.size());
  EngineSpec es = engine_spec(n, quad);
  es.diagonal = diagonal;
  const CellGrid cells(T, quad.points_per_unit);
  if (cells.total > (1L << 16))
    throw quadrature_failure("d1: base cell grid exceeds the quadrature budget",
                             static_cast<double>(cells.total));

  // The pair integral is symmetric, so only j >= i is evaluated.
  return parallel_chunk_sum(cells.total, [&](long lo, long hi) {
    double acc = 0.0;
    for (long i = lo; i < hi; ++i) {
      const BoxN a = cells.box(i);
      acc += pair_integral(a, a, K, g, es, 0);
      for (long j = i + 1; j < cells.total; ++j) {
        const BoxN b = cells.box(j);
        acc += 2.0 * pair_integral(a, b, K, g, es, 0);
      }
    }
    return acc;
  });
}

template <class Kernel, class Weight>
double d2_engine(const Kernel& K, const Weight& g, const std::vector<double>& T,
                 const QuadSpec& quad) {
  const int n = static_cast<int>(T.size());
  const EngineSpec es = engine_spec(n, quad);
  const CellGrid cells(T, quad.points_per_unit);
  const LatticePoints lattice(T);
  if (lattice.total == 0) return 0.0;

  return -2.0 * parallel_chunk_sum(cells.total, [&](long lo, long hi) {
    double acc = 0.0;
    double pt[kMaxDim] = {0.0, 0.0, 0.0};
    for (long i = lo; i < hi; ++i) {
      const BoxN a = cells.box(i);
      for (long j = 0; j < lattice.total; ++j) {
        lattice.point(j, pt);
        acc += point_box_integral(a, pt, g(pt, n), K, g, es, 0);
      }
    }
    return acc;
  });
}

template <class Kernel, class Weight>
double d3_engine(const Kernel& K, const Weight& g, const std::vector<double>& T) {
  const int n = static_cast<int>(T.size());
  const LatticePoints lattice(T);
  if (lattice.total == 0) return 0.0;

  return parallel_chunk_sum(lattice.total, [&](long lo, long hi) {
    double acc = 0.0;
    double pi[kMaxDim] = {0.0, 0.0, 0.0}, pj[kMaxDim] = {0.0, 0.0, 0.0};
    for (long i = lo; i < hi; ++i) {
      lattice.point(i, pi);
      const double gi = g(pi, n);
      for (long j = 0; j < lattice.total; ++j) {
        lattice.point(j, pj);
        double r2 = 0.0;
        for (int d = 0; d < n; ++d) {
          const double diff = pi[d] - pj[d];
          r2 += diff * diff;
        }
        acc += gi * g(pj, n) * K(std::sqrt(r2));
      }
    }
    return acc;
  });
}

// n = 3: Halton quasi-random rule for the 6-dimensional d1 integral.
template <class Kernel, class Weight>
double d1_qmc(const Kernel& K, const Weight& g, const std::vector<double>& T,
              long points, double* half_estimate) {
  const int n = static_cast<int>(T.size());
  quad::Halton seq(2 * n);
  double vol = 1.0;
  for (double t : T) vol *= t;
  vol *= vol;

  double sum = 0.0, sum_half = 0.0;
  double x[kMaxDim] = {0.0, 0.0, 0.0}, y[kMaxDim] = {0.0, 0.0, 0.0};
  for (long i = 0; i < points; ++i) {
    const std::vector<double> u = seq.next();
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      x[d] = u[d] * T[d];
      y[d] = u[n + d] * T[d];
      const double diff = x[d] - y[d];
      r2 += diff * diff;
    }
    sum += g(x, n) * g(y, n) * K(std::sqrt(r2));
    if (i == points / 2 - 1) sum_half = sum;
  }
  if (half_estimate) *half_estimate = vol * sum_half / (points / 2);
  return vol * sum / points;
}

double factorial(int m) {
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

void require_integer_T(const std::vector<double>& T, const char* who) {
  for (double t : T)
    if (std::abs(t - std::round(t)) > 1e-9)
      throw std::invalid_argument(std::string(who) +
                                  ": requires integer T per axis (see total_gap)");
}

struct TermSet {
  double d1, d2, d3;
};

TermSet evaluate_terms(const MsdConfig& cfg, int points_per_unit, long qmc_points) {
  QuadSpec q = cfg.quad;
  q.points_per_unit = points_per_unit;
  const CovPowKernel K(cfg.model, cfg.m);
  const RawWeight w{&cfg.g};
  TermSet t{};
  if (cfg.model.n <= 2) {
    t.d1 = d1_engine(K, w, cfg.T, q, DiagonalRule{});
  } else {
    t.d1 = d1_qmc(K, w, cfg.T, qmc_points, nullptr);
  }
  t.d2 = d2_engine(K, w, cfg.T, q);
  t.d3 = d3_engine(K, w, cfg.T);
  const double mf = factorial(cfg.m);
  t.d1 *= mf;
  t.d2 *= mf;
  t.d3 *= mf;
  return t;
}

}  // namespace

void MsdConfig::validate() const {
  const int n = model.n;
  if (static_cast<int>(T.size()) != n || g.n != n)
    throw std::invalid_argument("MsdConfig: T and g must match the model dimension");
  if (m < 1 || m > kMaxHermiteOrder)
    throw std::invalid_argument("MsdConfig: Hermite order out of range");
  if (model.alpha * m >= n)
    throw long_range_violation("MsdConfig: alpha*m must be < n (long-range regime)");
  for (double t : T)
    if (t < 1.0) throw std::invalid_argument("MsdConfig: extents must be >= 1");
  if (quad.points_per_unit < 2)
    throw std::invalid_argument("MsdConfig: quadrature points per unit must be >= 2");
}

double d1_term(const MsdConfig& cfg) {
  cfg.validate();
  const CovPowKernel K(cfg.model, cfg.m);
  const RawWeight w{&cfg.g};
  if (cfg.model.n <= 2)
    return factorial(cfg.m) * d1_engine(K, w, cfg.T, cfg.quad, DiagonalRule{});
  return factorial(cfg.m) * d1_qmc(K, w, cfg.T, cfg.mc_points, nullptr);
}

double d2_term(const MsdConfig& cfg) {
  cfg.validate();
  require_integer_T(cfg.T, "d2_term");
  const CovPowKernel K(cfg.model, cfg.m);
  const RawWeight w{&cfg.g};
  return factorial(cfg.m) * d2_engine(K, w, cfg.T, cfg.quad);
}

double d3_term(const MsdConfig& cfg) {
  cfg.validate();
  require_integer_T(cfg.T, "d3_term");
  const CovPowKernel K(cfg.model, cfg.m);
  const RawWeight w{&cfg.g};
  return factorial(cfg.m) * d3_engine(K, w, cfg.T);
}

MsdReport total_gap(const MsdConfig& cfg) {
  cfg.validate();
  const TermSet coarse = evaluate_terms(cfg, cfg.quad.points_per_unit, cfg.mc_points / 2);
  const TermSet fine = evaluate_terms(cfg, 2 * cfg.quad.points_per_unit, cfg.mc_points);

  MsdReport rep;
  rep.d1 = fine.d1;
  rep.d2 = fine.d2;
  rep.d3 = fine.d3;
  rep.total = fine.d1 + fine.d2 + fine.d3;
  const double coarse_total = coarse.d1 + coarse.d2 + coarse.d3;
  rep.error_estimate = std::abs(rep.total - coarse_total);

  double Ttilde = 0.0;
  for (double t : cfg.T) Ttilde = std::max(Ttilde, t);
  const double gd = cfg.g.at_diagonal(Ttilde);
  rep.denominator = std::pow(Ttilde, 2.0 * cfg.model.n - cfg.model.alpha * cfg.m) * gd * gd *
                    std::pow(slowly_varying_eval(cfg.model.L, Ttilde), cfg.m);
  rep.ratio = rep.total / rep.denominator;
  return rep;
}

double l12_constant(int n, int m, double alpha, const WeightFunction& gstar,
                    const std::vector<double>& a, const QuadSpec& quad) {
  const double s = alpha * m;
  if (s >= n)
    throw std::domain_error("l12_constant: alpha*m >= n makes the integral divergent");
  if (static_cast<int>(a.size()) != n)
    throw std::invalid_argument("l12_constant: limits must have dimension n");
  for (double al : a)
    if (!(al > 0.0 && al <= 1.0))
      throw std::invalid_argument("l12_constant: limits must lie in (0, 1]");

  EngineSpec es = engine_spec(n, quad);
  es.diagonal.power_kernel = true;
  es.diagonal.s = s;
  es.diagonal.kappa = quad::diagonal_cell_constant(n, s);

  // Equal cells per axis spanning [0, a_l] exactly.
  CellGrid cells(a, 1);  // placeholder axes; rebuilt below
  cells.axes.clear();
  cells.total = 1;
  for (int d = 0; d < n; ++d) {
    const int count = std::max(2, static_cast<int>(std::round(a[d] * quad.points_per_unit)));
    std::vector<std::pair<double, double>> axis;
    for (int j = 0; j < count; ++j)
      axis.emplace_back(a[d] * j / count, a[d] * (j + 1) / count);
    cells.axes.push_back(std::move(axis));
    cells.total *= count;
  }

  auto K = [s](double r) { return std::pow(r, -s); };
  auto g = [&gstar](const double* u, int dim) { return gstar.limit_raw(u, dim); };

  return parallel_chunk_sum(cells.total, [&](long lo, long hi) {
    double acc = 0.0;
    for (long i = lo; i < hi; ++i) {
      const BoxN A = cells.box(i);
      acc += pair_integral(A, A, K, g, es, 0);
      for (long j = i + 1; j < cells.total; ++j) {
        const BoxN B = cells.box(j);
        acc += 2.0 * pair_integral(A, B, K, g, es, 0);
      }
    }
    return acc;
  });
}

double d1_with_kernel(const std::function<double(double)>& kernel, const WeightFunction& g,
                      const std::vector<double>& T, const QuadSpec& quad) {
  const RawWeight w{&g};
  return d1_engine(kernel, w, T, quad, DiagonalRule{});
}

double d2_with_kernel(const std::function<double(double)>& kernel, const WeightFunction& g,
                      const std::vector<double>& T, const QuadSpec& quad) {
  const RawWeight w{&g};
  return d2_engine(kernel, w, T, quad);
}

double d3_with_kernel(const std::function<double(double)>& kernel, const WeightFunction& g,
                      const std::vector<double>& T) {
  const RawWeight w{&g};
  return d3_engine(kernel, w, T);
}

}  // namespace lrf
