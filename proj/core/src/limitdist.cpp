#include "lrf/limitdist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrf/errors.hpp"
#include "lrf/fieldsim.hpp"
#include "lrf/functionals.hpp"
#include "lrf/parallel.hpp"
#include "lrf/quadrature.hpp"
#include "lrf/rng.hpp"

namespace lrf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kMaxDim = 3;

std::complex<double> K_rect_raw(const double* x, const RectDomain& dom) {
  std::complex<double> prod(1.0, 0.0);
  for (int d = 0; d < dom.n; ++d) {
    const double w = dom.b[d] - dom.a[d];
    if (std::abs(x[d]) < 1e-300) {
      prod *= std::complex<double>(w, 0.0);
      continue;
    }
    const std::complex<double> num =
        std::exp(std::complex<double>(0.0, dom.b[d] * x[d])) -
        std::exp(std::complex<double>(0.0, dom.a[d] * x[d]));
    prod *= num / std::complex<double>(0.0, x[d]);
  }
  return prod;
}

double K2_raw(const double* x, const RectDomain& dom) {
  // |K|^2 factorizes: prod_j (2 - 2cos(w_j x_j)) / x_j^2.
  double prod = 1.0;
  for (int d = 0; d < dom.n; ++d) {
    const double w = dom.b[d] - dom.a[d];
    if (std::abs(x[d]) < 1e-8) {
      // series of (2 - 2cos(w x)) / x^2 near 0
      const double wx = w * x[d];
      prod *= w * w * (1.0 - wx * wx / 12.0);
    } else {
      const double s = 2.0 * std::sin(0.5 * w * x[d]) / x[d];
      prod *= s * s;
    }
  }
  return prod;
}

double oscillation_scale(const RectDomain& dom) {
  double s = 0.0;
  for (int d = 0; d < dom.n; ++d) s += std::max(std::abs(dom.a[d]), std::abs(dom.b[d]));
  return std::max(1e-6, s);
}

// Surface integral of |K(r omega)|^2 over the unit sphere directions.
double angular_K2(int n, const RectDomain& dom, double r, double osc) {
  double x[kMaxDim];
  if (n == 1) {
    x[0] = r;
    return 2.0 * K2_raw(x, dom);
  }
  if (n == 2) {
    const int panels = std::max(16, static_cast<int>(std::ceil(3.0 * r * osc)));
    const quad::Rule& gl = quad::gauss_legendre(8);
    double sum = 0.0;
    const double h = 2.0 * kPi / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h, half = 0.5 * h;
      for (int i = 0; i < 8; ++i) {
        const double theta = mid + half * gl.nodes[i];
        x[0] = r * std::cos(theta);
        x[1] = r * std::sin(theta);
        sum += half * gl.weights[i] * K2_raw(x, dom);
      }
    }
    return sum;
  }
  // n == 3: spherical coordinates, cos(psi) in [-1,1] and phi in [0,2pi).
  const int panels_c = std::max(8, static_cast<int>(std::ceil(r * osc)));
  const int panels_p = std::max(16, static_cast<int>(std::ceil(2.0 * r * osc)));
  const quad::Rule& gl = quad::gauss_legendre(8);
  double sum = 0.0;
  const double hc = 2.0 / panels_c;
  const double hp = 2.0 * kPi / panels_p;
  for (int pc = 0; pc < panels_c; ++pc) {
    const double cmid = -1.0 + (pc + 0.5) * hc, chalf = 0.5 * hc;
    for (int ic = 0; ic < 8; ++ic) {
      const double cp = cmid + chalf * gl.nodes[ic];
      const double sp = std::sqrt(std::max(0.0, 1.0 - cp * cp));
      const double wc = chalf * gl.weights[ic];
      for (int pp = 0; pp < panels_p; ++pp) {
        const double pmid = (pp + 0.5) * hp, phalf = 0.5 * hp;
        for (int ip = 0; ip < 8; ++ip) {
          const double phi = pmid + phalf * gl.nodes[ip];
          x[0] = r * sp * std::cos(phi);
          x[1] = r * sp * std::sin(phi);
          x[2] = r * cp;
          sum += wc * phalf * gl.weights[ip] * K2_raw(x, dom);
        }
      }
    }
  }
  return sum;
}

// int_lo^hi r^{tau-1} A(r) dr with oscillation-resolving panels.
double radial_span(int n, double tau, const RectDomain& dom, double lo, double hi,
                   double osc) {
  const int panels = std::max(4, static_cast<int>(std::ceil(0.75 * (hi - lo) * osc)));
  const quad::Rule& gl = quad::gauss_legendre(16);
  double sum = 0.0;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h, half = 0.5 * h;
    for (int i = 0; i < 16; ++i) {
      const double r = mid + half * gl.nodes[i];
      sum += half * gl.weights[i] * std::pow(r, tau - 1.0) * angular_K2(n, dom, r, osc);
    }
  }
  return sum;
}

// Head [0, r0] with the r^{tau-1} singularity absorbed by t = r^tau.
double radial_head(int n, double tau, const RectDomain& dom, double r0, double osc) {
  const quad::Rule& gl = quad::gauss_legendre(24);
  const double t1 = std::pow(r0, tau);
  double sum = 0.0;
  const int panels = 8;
  const double h = t1 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h, half = 0.5 * h;
    for (int i = 0; i < 24; ++i) {
      const double t = mid + half * gl.nodes[i];
      const double r = std::pow(t, 1.0 / tau);
      sum += half * gl.weights[i] * angular_K2(n, dom, r, osc) / tau;
    }
  }
  return sum;
}

// ---- kappa = 2: quasi-random rule in radially transformed coordinates ----

struct RadialRange {
  double lo, hi;
};

// QMC integral of |K(lambda_1 + lambda_2)|^2 prod ||lambda_i||^{tau_i - n}
// over the product of radial ranges. The substitution t = rho^tau makes the
// radial factor exactly uniform.
double lemma1_k2_region(int n, const std::vector<double>& tau, const RectDomain& dom,
                        const RadialRange& r1, const RadialRange& r2, long points) {
  const int dims_per = (n == 1) ? 1 : (n == 2 ? 2 : 3);
  quad::Halton seq(2 * dims_per);

  const double t1_lo = std::pow(r1.lo, tau[0]), t1_hi = std::pow(r1.hi, tau[0]);
  const double t2_lo = std::pow(r2.lo, tau[1]), t2_hi = std::pow(r2.hi, tau[1]);
  double measure = (t1_hi - t1_lo) / tau[0] * (t2_hi - t2_lo) / tau[1];
  if (n == 2) measure *= (2.0 * kPi) * (2.0 * kPi);
  if (n == 3) measure *= (4.0 * kPi) * (4.0 * kPi);

  double x[kMaxDim];
  double sum = 0.0;
  const int sign_combos = (n == 1) ? 4 : 1;
  for (long i = 0; i < points; ++i) {
    const std::vector<double> u = seq.next();
    const double rho1 = std::pow(t1_lo + u[0] * (t1_hi - t1_lo), 1.0 / tau[0]);
    const double rho2 = std::pow(t2_lo + u[dims_per] * (t2_hi - t2_lo), 1.0 / tau[1]);
    if (n == 1) {
      for (int s = 0; s < 4; ++s) {
        const double l1 = (s & 1) ? -rho1 : rho1;
        const double l2 = (s & 2) ? -rho2 : rho2;
        x[0] = l1 + l2;
        sum += K2_raw(x, dom);
      }
    } else if (n == 2) {
      const double th1 = 2.0 * kPi * u[1];
      const double th2 = 2.0 * kPi * u[3];
      x[0] = rho1 * std::cos(th1) + rho2 * std::cos(th2);
      x[1] = rho1 * std::sin(th1) + rho2 * std::sin(th2);
      sum += K2_raw(x, dom);
    } else {
      const double c1 = 2.0 * u[1] - 1.0, phi1 = 2.0 * kPi * u[2];
      const double c2 = 2.0 * u[4] - 1.0, phi2 = 2.0 * kPi * u[5];
      const double s1 = std::sqrt(std::max(0.0, 1.0 - c1 * c1));
      const double s2 = std::sqrt(std::max(0.0, 1.0 - c2 * c2));
      x[0] = rho1 * s1 * std::cos(phi1) + rho2 * s2 * std::cos(phi2);
      x[1] = rho1 * s1 * std::sin(phi1) + rho2 * s2 * std::sin(phi2);
      x[2] = rho1 * c1 + rho2 * c2;
      sum += K2_raw(x, dom);
    }
  }
  // For n = 1 the four sign combinations enumerate subregions of equal
  // measure, so their per-point values are summed, not averaged.
  (void)sign_combos;
  return measure * sum / points;
}

}  // namespace

RectDomain::RectDomain(std::vector<double> a_, std::vector<double> b_)
    : n(static_cast<int>(a_.size())), a(std::move(a_)), b(std::move(b_)) {
  if (a.size() != b.size() || a.empty() || n > kMaxDim)
    throw std::invalid_argument("RectDomain: a and b must share dimension 1..3");
  for (int d = 0; d < n; ++d)
    if (!(a[d] < 0.0 && 0.0 < b[d]))
      throw std::invalid_argument("RectDomain: requires a_l < 0 < b_l");
}

double RectDomain::volume() const {
  double v = 1.0;
  for (int d = 0; d < n; ++d) v *= b[d] - a[d];
  return v;
}

double RectDomain::max_extent() const {
  double m = 0.0;
  for (int d = 0; d < n; ++d) m = std::max(m, b[d] - a[d]);
  return m;
}

std::complex<double> kernel_K_rect(const std::vector<double>& x, const RectDomain& dom) {
  if (static_cast<int>(x.size()) != dom.n)
    throw std::invalid_argument("kernel_K_rect: dimension mismatch");
  return K_rect_raw(x.data(), dom);
}

std::complex<double> kernel_K_numeric(const std::vector<double>& x, const RectDomain& dom,
                                      int order) {
  if (static_cast<int>(x.size()) != dom.n)
    throw std::invalid_argument("kernel_K_numeric: dimension mismatch");
  // The integrand is separable, so the tensor rule is the product of the
  // per-axis panels.
  std::complex<double> prod(1.0, 0.0);
  const quad::Rule& gl = quad::gauss_legendre(order);
  for (int d = 0; d < dom.n; ++d) {
    const double w = dom.b[d] - dom.a[d];
    const int panels = std::max(2, static_cast<int>(std::ceil(std::abs(x[d]) * w / 3.0)));
    std::complex<double> axis(0.0, 0.0);
    const double h = w / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = dom.a[d] + (p + 0.5) * h, half = 0.5 * h;
      for (int i = 0; i < order; ++i) {
        const double u = mid + half * gl.nodes[i];
        axis += half * gl.weights[i] * std::exp(std::complex<double>(0.0, u * x[d]));
      }
    }
    prod *= axis;
  }
  return prod;
}

std::vector<double> lemma1_integral(int n, int kappa, const std::vector<double>& tau,
                                    const RectDomain& dom, const std::vector<double>& R_ladder,
                                    long qmc_points) {
  if (n != dom.n) throw std::invalid_argument("lemma1_integral: dimension mismatch");
  if (kappa < 1 || kappa > 2)
    throw std::invalid_argument("lemma1_integral: kappa must be 1 or 2");
  if (static_cast<int>(tau.size()) != kappa)
    throw std::invalid_argument("lemma1_integral: tau must have kappa entries");
  double tau_sum = 0.0;
  for (double t : tau) {
    if (t <= 0.0) throw std::domain_error("lemma1_integral: tau_i must be positive");
    tau_sum += t;
  }
  if (tau_sum >= n)
    throw std::domain_error("lemma1_integral: sum of tau_i must be < n (divergent otherwise)");
  if (R_ladder.empty()) return {};
  for (std::size_t k = 0; k + 1 < R_ladder.size(); ++k)
    if (R_ladder[k + 1] <= R_ladder[k])
      throw std::invalid_argument("lemma1_integral: R ladder must increase");

  const double osc = oscillation_scale(dom);
  std::vector<double> values;

  if (kappa == 1) {
    const double r0 = std::min(1.0, R_ladder.front());
    double acc = radial_head(n, tau[0], dom, r0, osc);
    // Dyadic spans up to the first rung, then rung-to-rung spans.
    double lo = r0;
    for (double hi = 2.0 * r0; lo < R_ladder.front(); hi *= 2.0) {
      const double top = std::min(hi, R_ladder.front());
      acc += radial_span(n, tau[0], dom, lo, top, osc);
      lo = top;
    }
    values.push_back(acc);
    for (std::size_t k = 1; k < R_ladder.size(); ++k) {
      double span_lo = R_ladder[k - 1];
      // keep spans dyadic for uniform panel accuracy
      for (double hi = 2.0 * span_lo; span_lo < R_ladder[k]; hi *= 2.0) {
        const double top = std::min(hi, R_ladder[k]);
        acc += radial_span(n, tau[0], dom, span_lo, top, osc);
        span_lo = top;
      }
      values.push_back(acc);
    }
    return values;
  }

  // kappa == 2: core value plus direct shell increments, each quasi-random.
  const double R1 = R_ladder.front();
  double acc = lemma1_k2_region(n, tau, dom, {0.0, R1}, {0.0, R1}, qmc_points);
  values.push_back(acc);
  for (std::size_t k = 1; k < R_ladder.size(); ++k) {
    const RadialRange inner{0.0, R_ladder[k - 1]};
    const RadialRange outer{R_ladder[k - 1], R_ladder[k]};
    acc += lemma1_k2_region(n, tau, dom, outer, inner, qmc_points);
    acc += lemma1_k2_region(n, tau, dom, inner, outer, qmc_points);
    acc += lemma1_k2_region(n, tau, dom, outer, outer, qmc_points);
    values.push_back(acc);
  }
  return values;
}

double limit_variance_k1(int n, double alpha, const RectDomain& dom) {
  if (n != dom.n) throw std::invalid_argument("limit_variance_k1: dimension mismatch");
  if (!(alpha > 0.0 && alpha < n))
    throw std::domain_error("limit_variance_k1: requires 0 < alpha < n");

  const double osc = oscillation_scale(dom);
  const double r0 = 1.0 / std::max(1.0, dom.max_extent());
  double acc = radial_head(n, alpha, dom, r0, osc);

  const double r_max = (n == 3) ? 32.0 : 64.0;
  double lo = r0;
  double prev_inc = 0.0, last_inc = 0.0;
  while (lo < r_max) {
    const double hi = 2.0 * lo;
    const double inc = radial_span(n, alpha, dom, lo, hi, osc);
    acc += inc;
    prev_inc = last_inc;
    last_inc = inc;
    lo = hi;
  }
  // Geometric extrapolation of the truncated tail.
  if (prev_inc > 0.0 && last_inc > 0.0) {
    const double rho = last_inc / prev_inc;
    if (rho > 0.0 && rho < 0.95) acc += last_inc * rho / (1.0 - rho);
  }
  return c1_constant(n, alpha) * acc;
}

void SampleSet::write_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("SampleSet::write_csv: cannot open " + path);
  std::fprintf(fp, "value\n");
  for (double v : values) std::fprintf(fp, "%.17g\n", v);
  std::fclose(fp);
}

SampleSet sample_limit_k1(int n, double alpha, const RectDomain& dom, long nsamples,
                          std::uint64_t seed) {
  const double sigma = std::sqrt(limit_variance_k1(n, alpha, dom));
  SampleSet s;
  s.values.resize(nsamples);
  s.generator = "k1_gaussian";
  s.seed = seed;
  parallel_for(nsamples, [&](long i) {
    NormalStream rng(seed, static_cast<std::uint64_t>(i));
    s.values[i] = sigma * rng.next();
  });
  return s;
}

namespace {

// L2 mass of the Riesz weight over one cell: integral of ||lambda||^{alpha-n}.
// Cells away from the origin are smooth (tensor GL); the cell's minimum norm
// is at least half its edge by construction.
double riesz_cell_mass(int n, double alpha, const std::vector<double>& center, double edge) {
  const double s = n - alpha;
  double min2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const double m = std::max(0.0, std::abs(center[d]) - 0.5 * edge);
    min2 += m * m;
  }
  if (min2 == 0.0) {
    bool at_origin = true;
    for (int d = 0; d < n; ++d) at_origin = at_origin && center[d] == 0.0;
    if (at_origin)
      return std::pow(0.5 * edge, alpha) * quad::box_riesz_mass(n, s);
  }
  const quad::Rule& gl = quad::gauss_legendre(16);
  double sum = 0.0;
  int idx[kMaxDim] = {0, 0, 0};
  double u[kMaxDim];
  while (true) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      u[d] = center[d] + 0.5 * edge * gl.nodes[idx[d]];
      w *= 0.5 * edge * gl.weights[idx[d]];
    }
    double norm2 = 0.0;
    for (int d = 0; d < n; ++d) norm2 += u[d] * u[d];
    sum += w * std::pow(norm2, -0.5 * s);
    int d = 0;
    while (d < n && ++idx[d] == 16) idx[d++] = 0;
    if (d == n) break;
  }
  return sum;
}

}  // namespace

RosenblattSampler::RosenblattSampler(int n, double alpha, const RectDomain& dom,
                                     const SpectralDiscretization& disc) {
  if (n != dom.n || n != disc.n)
    throw std::invalid_argument("RosenblattSampler: dimension mismatch");
  if (!(alpha > 0.0 && alpha < 0.5 * n))
    throw std::domain_error("RosenblattSampler: requires 0 < alpha < n/2 (square-integrable kernel)");

  const double c1 = c1_constant(n, alpha);
  const double expo = -0.5 * (n - alpha);
  const double edge = 2.0 * disc.cutoff / disc.cells_per_axis;
  const std::size_t h = disc.half_cells.size();
  const std::size_t dim = 2 * h + 1;  // (U_c, V_c) pairs plus the origin mode

  // Per-cell weight factor phi_c with phi_c^2 = cell L2 mass of the Riesz
  // weight; rings <= 2 (and the origin cell) use the integrated mass, the
  // far field the center value.
  std::vector<double> phi(h);
  for (std::size_t c = 0; c < h; ++c) {
    const SpectralCell& cell = disc.half_cells[c];
    double ring = 0.0, norm2 = 0.0;
    for (int d = 0; d < n; ++d) {
      ring = std::max(ring, std::abs(cell.center[d]) / edge);
      norm2 += cell.center[d] * cell.center[d];
    }
    if (ring <= 2.5)
      phi[c] = std::sqrt(riesz_cell_mass(n, alpha, cell.center, edge));
    else
      phi[c] = std::pow(std::sqrt(norm2), expo) * std::sqrt(cell.volume);
  }
  const std::vector<double> origin(n, 0.0);
  const double phi0 = std::sqrt(riesz_cell_mass(n, alpha, origin, edge));

  // Raw coefficient matrix of the real quadratic form Q = sum C_ij z_i z_j,
  // z = (U_1..U_h, V_1..V_h, U_0); the symmetrized M = (C + C^T)/2 is
  // decomposed. Derivation: cells enumerate a half-space, the mirror noise
  // is the conjugate, and the origin cell is its own mirror (real mode).
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dim, dim);
  double sum_lambda[kMaxDim], diff_lambda[kMaxDim];
  const double sqrt2 = std::sqrt(2.0);
  for (std::size_t c = 0; c < h; ++c) {
    const SpectralCell& cc = disc.half_cells[c];
    for (std::size_t d = 0; d < h; ++d) {
      const SpectralCell& cd = disc.half_cells[d];
      for (int k = 0; k < n; ++k) {
        sum_lambda[k] = cc.center[k] + cd.center[k];
        diff_lambda[k] = cc.center[k] - cd.center[k];
      }
      const double scale = c1 * phi[c] * phi[d];
      const std::complex<double> A = scale * K_rect_raw(sum_lambda, dom);
      const std::complex<double> B = scale * K_rect_raw(diff_lambda, dom);
      const double a = A.real(), bb = A.imag();
      const double e = B.real(), f = B.imag();
      C(c, d) += a + e;           // U_c U_d
      C(h + c, h + d) += -a + e;  // V_c V_d
      C(c, h + d) += -bb + f;     // U_c V_d
      C(h + c, d) += -bb - f;     // V_c U_d
    }
    // Origin cross terms: 2 xi_0 sqrt(2) Re(F (U_c + i V_c)/sqrt(2)) summed
    // over the four (0,+-c) orderings.
    const std::complex<double> F =
        c1 * phi0 * phi[c] * K_rect_raw(cc.center.data(), dom);
    C(2 * h, c) += 2.0 * sqrt2 * F.real();
    C(2 * h, h + c) += -2.0 * sqrt2 * F.imag();
  }
  C(2 * h, 2 * h) = c1 * phi0 * phi0 * dom.volume();  // K(0) = |Delta|

  Eigen::MatrixXd M = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("RosenblattSampler: eigen decomposition failed");
  eigenvalues_.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);
}

double RosenblattSampler::variance() const {
  double s = 0.0;
  for (double mu : eigenvalues_) s += mu * mu;
  return 2.0 * s;
}

double RosenblattSampler::third_moment() const {
  double s = 0.0;
  for (double mu : eigenvalues_) s += mu * mu * mu;
  return 8.0 * s;
}

SampleSet RosenblattSampler::sample(long nsamples, std::uint64_t seed) const {
  SampleSet s;
  s.values.resize(nsamples);
  s.generator = "k2_rosenblatt";
  s.seed = seed;
  const std::vector<double>& mu = eigenvalues_;
  parallel_for(nsamples, [&](long i) {
    NormalStream rng(seed, static_cast<std::uint64_t>(i));
    double v = 0.0;
    for (double m : mu) {
      const double z = rng.next();
      v += m * (z * z - 1.0);
    }
    s.values[i] = v;
  });
  return s;
}

SampleSet sample_limit_k2(int n, double alpha, const RectDomain& dom,
                          const SpectralDiscretization& disc, long nsamples,
                          std::uint64_t seed) {
  return RosenblattSampler(n, alpha, dom, disc).sample(nsamples, seed);
}

double ks_distance(const SampleSet& s1, const SampleSet& s2) {
  if (s1.values.empty() || s2.values.empty())
    throw std::invalid_argument("ks_distance: empty sample set");
  std::vector<double> a = s1.values, b = s2.values;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double ks = 0.0;
  while (i < a.size() || j < b.size()) {
    const double x = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    ks = std::max(ks, std::abs(i / na - j / nb));
  }
  return ks;
}

namespace {

struct Moments {
  double mean, var, skew;
};

Moments sample_moments(const std::vector<double>& v) {
  const double count = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= count;
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= count;
  m3 /= count;
  const double sd = std::sqrt(std::max(m2, 1e-300));
  return Moments{mean, m2, m3 / (sd * sd * sd)};
}

std::vector<double> studentized(const std::vector<double>& v) {
  const Moments m = sample_moments(v);
  std::vector<double> out(v.size());
  const double sd = std::sqrt(std::max(m.var, 1e-300));
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - m.mean) / sd;
  return out;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const ConvergenceSpec& spec) {
  if (spec.reps == 0) return {};
  const int n = spec.model.n;
  if (spec.dom.n != n) throw std::invalid_argument("convergence_study: dimension mismatch");
  const double alpha = spec.model.alpha;
  if (alpha * spec.m >= n)
    throw long_range_violation("convergence_study: alpha*kappa must be < n");

  // Limit sample shared across the ladder.
  SampleSet limit;
  if (spec.kind == ConvergenceSpec::Kind::k1_gaussian) {
    limit = sample_limit_k1(n, alpha, spec.dom, spec.limit_samples, mix_seed(spec.seed, 101));
  } else if (spec.kind == ConvergenceSpec::Kind::k2_rosenblatt) {
    SpectralModel sm{n, alpha, spec.model.L};
    const SpectralDiscretization disc =
        make_spectral_discretization(sm, spec.spectral_cutoff, spec.spectral_cells);
    limit = sample_limit_k2(n, alpha, spec.dom, disc, spec.limit_samples,
                            mix_seed(spec.seed, 102));
  }

  std::vector<ConvergenceRow> rows;
  int kappa = spec.m;
  for (std::size_t t_idx = 0; t_idx < spec.T_ladder.size(); ++t_idx) {
    const double T = spec.T_ladder[t_idx];

    ConvergenceRow row;
    row.T = T;
    row.reps = spec.reps;
    row.seed = spec.seed;

    if (spec.kind == ConvergenceSpec::Kind::theorem1_demo) {
      // Midpoint grid over the dilated rectangle.
      std::vector<double> lo(n), hi(n), extent(n);
      for (int d = 0; d < n; ++d) {
        lo[d] = spec.dom.a[d] * T;
        hi[d] = spec.dom.b[d] * T;
        extent[d] = hi[d] - lo[d];
      }
      const GridSpec grid = GridSpec::midpoint_box(lo, hi, spec.q);
      const ExactFieldSimulator sim(spec.model, grid);
      std::vector<double> kr(spec.reps), krk(spec.reps);
      parallel_for(spec.reps, [&](long r) {
        const FieldSample f = sim.sample(spec.seed, (t_idx << 40) + r);
        const Theorem1Pair pair = theorem1_pair(spec.G, kappa, f, extent, spec.q);
        kr[r] = pair.K_r;
        krk[r] = pair.K_r_kappa;
      });
      SampleSet s1{studentized(kr), "K_r", spec.seed};
      SampleSet s2{studentized(krk), "K_r_kappa", spec.seed};
      row.ks = ks_distance(s1, s2);
      const Moments m = sample_moments(s1.values);
      row.mean = m.mean;
      row.var = m.var;
      row.skew = m.skew;
      rows.push_back(row);
      continue;
    }

    // Lattice of the dilated rectangle.
    std::vector<long> lo(n), hi(n);
    for (int d = 0; d < n; ++d) {
      lo[d] = static_cast<long>(std::ceil(spec.dom.a[d] * T));
      hi[d] = static_cast<long>(std::floor(spec.dom.b[d] * T));
    }
    const GridSpec grid = GridSpec::integer_box(lo, hi);
    const ExactFieldSimulator sim(spec.model, grid);
    const double norm = std::pow(T, n - 0.5 * kappa * alpha) *
                        std::pow(slowly_varying_eval(spec.model.L, T), 0.5 * kappa);

    std::vector<double> sums(spec.reps);
    parallel_for(spec.reps, [&](long r) {
      const FieldSample f = sim.sample(spec.seed, (t_idx << 40) + r);
      double s = 0.0;
      for (double v : f.values) s += hermite_eval(kappa, v);
      sums[r] = s / norm;
    });

    SampleSet sample{std::move(sums), "normalized_sum", spec.seed};
    row.ks = ks_distance(sample, limit);
    const Moments m = sample_moments(sample.values);
    row.mean = m.mean;
    row.var = m.var;
    row.skew = m.skew;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lrf
