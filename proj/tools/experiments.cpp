#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "config.hpp"
#include "lrf/covmodels.hpp"
#include "lrf/csv.hpp"
#include "lrf/fieldsim.hpp"
#include "lrf/functionals.hpp"
#include "lrf/hermite.hpp"
#include "lrf/limitdist.hpp"
#include "lrf/msd.hpp"
#include "lrf/parallel.hpp"
#include "lrf/rng.hpp"

namespace lrf::cli {

namespace {

namespace fs = std::filesystem;

SlowlyVarying build_L(const Config& c, const std::string& prefix) {
  const std::string family = c.get_string(prefix + ".L", "constant");
  if (family == "constant") return SlowlyVarying::constant(c.get_real(prefix + ".L.c", 1.0));
  if (family == "log_shifted")
    return SlowlyVarying::log_shifted(c.get_real(prefix + ".L.c", 1.0),
                                      c.get_real(prefix + ".L.s", 2.718281828459045));
  if (family == "cauchy_factor")
    return SlowlyVarying::cauchy_factor(c.get_real(prefix + ".L.alpha"));
  throw std::runtime_error("unknown slowly varying family: " + family);
}

CovarianceModel build_model(const Config& c) {
  const std::string family = c.get_string("model.family", "cauchy");
  const int n = static_cast<int>(c.get_int("model.n"));
  const double alpha = c.get_real("model.alpha");
  if (family == "cauchy") return CovarianceModel::cauchy(n, alpha);
  if (family == "pure_power_tail")
    return CovarianceModel::pure_power_tail(n, alpha, build_L(c, "model"));
  if (family == "generic")
    return CovarianceModel::generic(n, alpha, build_L(c, "model"),
                                    c.get_real("model.head_radius", 0.0));
  throw std::runtime_error("unknown covariance family: " + family);
}

WeightFunction build_weight(const Config& c, int n) {
  const std::string family = c.get_string("weight.family", "constant");
  if (family == "constant") return WeightFunction::constant(n, c.get_real("weight.c", 1.0));
  if (family == "power") return WeightFunction::power(c.get_reals("weight.mu"));
  if (family == "power_log") return WeightFunction::power_log(c.get_reals("weight.mu"));
  throw std::runtime_error("unknown weight family: " + family);
}

TestFunction build_function(const Config& c) {
  const std::string family = c.get_string("function.family", "monomial");
  if (family == "monomial")
    return TestFunction::monomial(static_cast<int>(c.get_int("function.power", 2)));
  if (family == "indicator") return TestFunction::indicator_positive();
  if (family == "abs") return TestFunction::absolute_value();
  if (family == "poly") {
    const std::vector<double> coeffs = c.get_reals("function.coeffs");
    return TestFunction::custom([coeffs](double x) {
      double v = 0.0, p = 1.0;
      for (double a : coeffs) {
        v += a * p;
        p *= x;
      }
      return v;
    });
  }
  throw std::runtime_error("unknown test function family: " + family);
}

RectDomain build_domain(const Config& c) {
  return RectDomain(c.get_reals("domain.a"), c.get_reals("domain.b"));
}

QuadSpec build_quad(const Config& c) {
  QuadSpec q;
  q.points_per_unit = static_cast<int>(c.get_int("quad.points_per_unit", 2));
  q.diag_depth = static_cast<int>(c.get_int("quad.diag_depth", 4));
  q.diag_radius = c.get_real("quad.diag_radius", 1.0);
  q.admissibility = c.get_real("quad.admissibility", 2.0);
  return q;
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct OutputTracker {
  std::vector<std::string> paths;

  std::string open(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const std::string path = (fs::path(dir) / name).string();
    paths.push_back(path);
    return path;
  }

  void discard_all() {
    for (const std::string& p : paths) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

void maybe_json_mirror(const std::string& csv_path, const RunOptions& opt,
                       OutputTracker& out) {
  if (!opt.json_mirror) return;
  std::ifstream in(csv_path);
  if (!in) return;
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  std::istringstream hs(header);
  std::string col;
  while (std::getline(hs, col, ',')) cols.push_back(col);
  nlohmann::json rows = nlohmann::json::array();
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    nlohmann::json row;
    std::string cell;
    std::size_t i = 0;
    while (std::getline(ls, cell, ',') && i < cols.size()) row[cols[i++]] = cell;
    rows.push_back(row);
  }
  const std::string mirror_path = csv_path + ".json";
  out.paths.push_back(mirror_path);
  std::ofstream mirror(mirror_path);
  mirror << rows.dump(1) << "\n";
}

// ---- experiment bodies -----------------------------------------------------

void run_hermite_coeffs(const Config& c, const RunOptions& opt, OutputTracker& out) {
  const TestFunction G = build_function(c);
  const int jmax = static_cast<int>(c.get_int("run.jmax", 10));
  const int nodes = static_cast<int>(c.get_int("run.nodes", 200));
  const HermiteExpansion e = hermite_coefficients(G, jmax, nodes);

  const std::string path = out.open(opt.out_dir, c.get_string("output.csv", "hermite_coeffs.csv"));
  CsvWriter w(path, {"j", "C_j"});
  for (int j = 0; j <= e.jmax; ++j) w.row({j, e.coeffs[j]});
  w.close();
  maybe_json_mirror(path, opt, out);
}

void run_field_validate(const Config& c, const RunOptions& opt, OutputTracker& out,
                        std::uint64_t seed) {
  const CovarianceModel model = build_model(c);
  const std::vector<long> extents = c.get_ints("grid.extents");
  const long reps = c.get_int("run.reps", 200);
  const GridSpec grid = GridSpec::integer_lattice(extents);
  const ExactFieldSimulator sim(model, grid);

  std::vector<FieldSample> samples(reps);
  parallel_for(reps, [&](long r) { samples[r] = sim.sample(seed, r); });

  const std::vector<long> lag_flat = c.get_ints("run.lags");
  const int n = model.n;
  if (lag_flat.size() % n != 0)
    throw std::runtime_error("run.lags must hold a multiple of n integers");

  const std::string path = out.open(opt.out_dir, c.get_string("output.csv", "field_validate.csv"));
  std::vector<std::string> cols;
  for (int d = 0; d < n; ++d) cols.push_back("lag" + std::to_string(d));
  cols.insert(cols.end(), {"estimate", "stderr", "target"});
  CsvWriter w(path, cols);
  for (std::size_t k = 0; k + n <= lag_flat.size(); k += n) {
    std::vector<long> lag(lag_flat.begin() + k, lag_flat.begin() + k + n);
    const CovEstimate est = empirical_covariance(samples, lag);
    double r2 = 0.0;
    for (long l : lag) r2 += static_cast<double>(l) * l;
    std::vector<CsvValue> row;
    for (long l : lag) row.push_back(l);
    row.push_back(est.estimate);
    row.push_back(est.stderr_);
    row.push_back(covariance_eval(model, std::sqrt(r2)));
    w.row(row);
  }
  w.close();
  maybe_json_mirror(path, opt, out);
}

void run_msd_ratio(const Config& c, const RunOptions& opt, OutputTracker& out) {
  const CovarianceModel model = build_model(c);
  const int m = static_cast<int>(c.get_int("run.m", 1));
  const WeightFunction g = build_weight(c, model.n);
  const std::vector<double> ladder = c.get_reals("run.T");

  const std::string path = out.open(opt.out_dir, c.get_string("output.csv", "msd_ratio.csv"));
  std::vector<std::string> cols = {"n", "m", "alpha", "L", "g", "T", "d1", "d2",
                                   "d3", "total", "denominator", "ratio", "error_estimate"};
  CsvWriter w(path, cols);
  for (double T : ladder) {
    MsdConfig cfg;
    cfg.model = model;
    cfg.g = g;
    cfg.m = m;
    cfg.T.assign(model.n, T);
    cfg.quad = build_quad(c);
    cfg.mc_points = c.get_int("quad.mc_points", 1 << 17);
    const MsdReport rep = total_gap(cfg);
    w.row({model.n, m, model.alpha, model.L.describe(), g.describe(), T, rep.d1, rep.d2,
           rep.d3, rep.total, rep.denominator, rep.ratio, rep.error_estimate});
  }
  w.close();
  maybe_json_mirror(path, opt, out);
}

void run_l12(const Config& c, const RunOptions& opt, OutputTracker& out) {
  const int n = static_cast<int>(c.get_int("run.n"));
  const int m = static_cast<int>(c.get_int("run.m", 1));
  const double alpha = c.get_real("run.alpha");
  const WeightFunction g = build_weight(c, n);
  std::vector<double> a = c.has("run.a") ? c.get_reals("run.a") : std::vector<double>(n, 1.0);
  const double value = l12_constant(n, m, alpha, g, a, build_quad(c));

  const std::string path = out.open(opt.out_dir, c.get_string("output.csv", "l12.csv"));
  CsvWriter w(path, {"n", "m", "alpha", "g", "l12"});
  w.row({n, m, alpha, g.describe(), value});
  w.close();
  maybe_json_mirror(path, opt, out);
}

void run_kernel_check(const Config& c, const RunOptions& opt, OutputTracker& out,
                      std::uint64_t seed) {
  const RectDomain dom = build_domain(c);
  const long count = c.get_int("run.count", 100);
  const double span = c.get_real("run.span", 10.0);

  const std::string path = out.open(opt.out_dir, c.get_string("output.csv", "kernel_check.csv"));
  std::vector<std::string> cols;
  for (int d = 0; d < dom.n; ++d) cols.push_back("x" + std::to_string(d));
  cols.insert(cols.end(), {"product_re", "product_im", "numeric_re", "numeric_im", "abs_err"});
  CsvWriter w(path, cols);

  NormalStream rng(seed);
  for (long i = 0; i < count; ++i) {
    std::vector<double> x(dom.n);
    for (int d = 0; d < dom.n; ++d) x[d] = span * (2.0 * rng.uniform() - 1.0);
    const std::complex<double> prod = kernel_K_rect(x, dom);
    const std::complex<double> num = kernel_K_numeric(x, dom);
    std::vector<CsvValue> row;
    for (double v : x) row.push_back(v);
    row.insert(row.end(), {prod.real(), prod.imag(), num.real(), num.imag(),
                           std::abs(prod - num)});
    w.row(row);
  }
  w.close();
  maybe_json_mirror(path, opt, out);
}

void run_limit_sample(const Config& c, const RunOptions& opt, OutputTracker& out,
                      std::uint64_t seed) {
  const RectDomain dom = build_domain(c);
  const int n = dom.n;
  const double alpha = c.get_real("run.alpha");
  const long nsamples = c.get_int("run.nsamples", 10000);
  const std::string kind = c.get_string("run.kind", "k1");

  SampleSet s;
  if (kind == "k1") {
    s = sample_limit_k1(n, alpha, dom, nsamples, seed);
  } else if (kind == "k2") {
    SpectralModel sm{n, alpha, SlowlyVarying::constant(1.0)};
    const SpectralDiscretization disc = make_spectral_discretization(
        sm, c.get_real("spectral.cutoff", 40.0),
        static_cast<int>(c.get_int("spectral.cells_per_axis", n == 1 ? 128 : 64)));
    s = sample_limit_k2(n, alpha, dom, disc, nsamples, seed);
  } else {
    throw std::runtime_error("unknown limit sample kind: " + kind);
  }
  const std::string path = out.open(opt.out_dir, c.get_string("output.csv", "limit_sample.csv"));
  s.write_csv(path);
  maybe_json_mirror(path, opt, out);
}

void run_convergence(const Config& c, const RunOptions& opt, OutputTracker& out,
                     std::uint64_t seed, ConvergenceSpec::Kind kind) {
  ConvergenceSpec spec;
  spec.kind = kind;
  spec.model = build_model(c);
  spec.dom = build_domain(c);
  spec.m = static_cast<int>(c.get_int("run.m", kind == ConvergenceSpec::Kind::k2_rosenblatt ? 2 : 1));
  spec.T_ladder = c.get_reals("run.T");
  spec.reps = c.get_int("run.reps", 2000);
  spec.seed = seed;
  spec.q = static_cast<int>(c.get_int("run.q", 2));
  spec.limit_samples = c.get_int("run.limit_samples", 20000);
  spec.spectral_cutoff = c.get_real("spectral.cutoff", 40.0);
  spec.spectral_cells = static_cast<int>(c.get_int("spectral.cells_per_axis", 128));
  if (kind == ConvergenceSpec::Kind::theorem1_demo) spec.G = build_function(c);

  const std::vector<ConvergenceRow> rows = convergence_study(spec);
  const std::string path = out.open(opt.out_dir, c.get_string("output.csv", "convergence.csv"));
  CsvWriter w(path, {"T", "reps", "ks", "mean", "var", "skew", "seed"});
  for (const ConvergenceRow& r : rows)
    w.row({r.T, r.reps, r.ks, r.mean, r.var, r.skew, static_cast<unsigned long long>(r.seed)});
  w.close();
  maybe_json_mirror(path, opt, out);
}

}  // namespace

std::vector<Violation> validate(const Config& c) {
  std::vector<Violation> v;
  const std::string kind = c.get_string("experiment", "");
  if (kind.empty()) {
    v.push_back({"experiment kind must be one of hermite-coeffs | field-validate | "
                 "msd-ratio | l12 | kernel-check | limit-sample | convergence-study | "
                 "theorem1-demo"});
    return v;
  }

  auto check = [&](bool ok, const std::string& precondition) {
    if (!ok) v.push_back({precondition});
  };

  try {
    if (kind == "hermite-coeffs") {
      const long jmax = c.get_int("run.jmax", 10);
      const long nodes = c.get_int("run.nodes", 200);
      check(jmax >= 0 && jmax <= kMaxHermiteOrder, "jmax <= 30 (order guard)");
      check(nodes >= 4 * jmax, "nodes >= 4*jmax");
    } else if (kind == "field-validate") {
      const CovarianceModel model = build_model(c);
      long total = 1;
      for (long e : c.get_ints("grid.extents")) total *= e;
      check(total <= kMaxExactPoints, "total points <= 8192 for exact factorization");
      check(c.get_int("run.reps", 200) >= 30, "empirical covariance needs >= 30 samples");
      (void)model;
    } else if (kind == "msd-ratio") {
      const CovarianceModel model = build_model(c);
      const long m = c.get_int("run.m", 1);
      check(model.alpha * m < model.n,
            "alpha*m < n (long-range condition; keeps the normalized variance bounded)");
      for (double T : c.get_reals("run.T")) check(T >= 1.0, "T >= 1 per axis");
      check(c.get_int("quad.points_per_unit", 2) >= 2, "quadrature points per unit >= 2");
    } else if (kind == "l12") {
      const long n = c.get_int("run.n");
      const long m = c.get_int("run.m", 1);
      const double alpha = c.get_real("run.alpha");
      check(alpha * m < n, "alpha*m < n (integrable singularity)");
      if (c.has("run.a"))
        for (double a : c.get_reals("run.a"))
          check(a > 0.0 && a <= 1.0, "a_l in (0, 1]");
    } else if (kind == "kernel-check" || kind == "limit-sample" ||
               kind == "convergence-study" || kind == "theorem1-demo") {
      const std::vector<double> a = c.get_reals("domain.a");
      const std::vector<double> b = c.get_reals("domain.b");
      check(a.size() == b.size() && !a.empty(), "domain a and b share dimension");
      for (std::size_t d = 0; d < std::min(a.size(), b.size()); ++d)
        check(a[d] < 0.0 && 0.0 < b[d], "a_l < 0 < b_l");
      if (kind == "limit-sample" && c.get_string("run.kind", "k1") == "k2") {
        check(c.get_real("run.alpha") < 0.5 * static_cast<double>(a.size()),
              "alpha < n/2 for the kappa=2 limit");
      }
      if (kind == "convergence-study" || kind == "theorem1-demo") {
        const CovarianceModel model = build_model(c);
        const long default_m = c.get_string("run.kind", "k1") == "k2" ? 2 : 1;
        const long m = c.get_int("run.m", default_m);
        check(model.alpha * m < model.n, "alpha*kappa < n (long-range condition)");
      }
    } else {
      v.push_back({"unknown experiment kind: " + kind});
    }
  } catch (const std::exception& e) {
    v.push_back({e.what()});
  }
  return v;
}

RunManifest run(const Config& config, const RunOptions& options) {
  const std::vector<Violation> violations = validate(config);
  if (!violations.empty()) {
    std::string msg = "configuration invalid:";
    for (const Violation& v : violations) msg += "\n  - " + v.precondition;
    throw std::invalid_argument(msg);
  }

  if (options.workers > 0) set_max_workers(options.workers);
  const std::uint64_t seed =
      options.seed_override.value_or(config.get_u64("run.seed", 42));

  RunManifest manifest;
  manifest.experiment = config.get_string("experiment");
  manifest.started = timestamp_now();

  OutputTracker out;
  try {
    const std::string& kind = manifest.experiment;
    if (kind == "hermite-coeffs")
      run_hermite_coeffs(config, options, out);
    else if (kind == "field-validate")
      run_field_validate(config, options, out, seed);
    else if (kind == "msd-ratio")
      run_msd_ratio(config, options, out);
    else if (kind == "l12")
      run_l12(config, options, out);
    else if (kind == "kernel-check")
      run_kernel_check(config, options, out, seed);
    else if (kind == "limit-sample")
      run_limit_sample(config, options, out, seed);
    else if (kind == "convergence-study") {
      const std::string sub = config.get_string("run.kind", "k1");
      run_convergence(config, options, out, seed,
                      sub == "k2" ? ConvergenceSpec::Kind::k2_rosenblatt
                                  : ConvergenceSpec::Kind::k1_gaussian);
    } else if (kind == "theorem1-demo")
      run_convergence(config, options, out, seed, ConvergenceSpec::Kind::theorem1_demo);
    else
      throw std::runtime_error("unknown experiment kind: " + kind);
  } catch (...) {
    out.discard_all();
    throw;
  }

  manifest.finished = timestamp_now();
  for (const std::string& p : out.paths) manifest.outputs.emplace_back(p, fnv1a64_file(p));

  nlohmann::json j;
  j["experiment"] = manifest.experiment;
  j["version"] = "0.1.0";
  j["started"] = manifest.started;
  j["finished"] = manifest.finished;
  j["seed"] = seed;
  nlohmann::json echo;
  for (const auto& [k, v] : config.entries()) echo[k] = v;
  j["config"] = echo;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [path, sum] : manifest.outputs) {
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(sum));
    outs.push_back({{"path", path}, {"fnv1a64", hex}});
  }
  j["outputs"] = outs;
  std::ofstream mf(fs::path(options.out_dir) / "manifest.json");
  mf << j.dump(1) << "\n";

  return manifest;
}

}  // namespace lrf::cli
