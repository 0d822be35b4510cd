#include <benchmark/benchmark.h>

#include "lrf/covmodels.hpp"
#include "lrf/fieldsim.hpp"
#include "lrf/hermite.hpp"
#include "lrf/limitdist.hpp"
#include "lrf/msd.hpp"

using namespace lrf;

static void CovarianceEval(benchmark::State& state) {
  const auto model = CovarianceModel::cauchy(2, 0.6);
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(covariance_eval(model, r));
    r += 0.001;
    if (r > 100.0) r = 0.0;
  }
}
BENCHMARK(CovarianceEval);

static void HermiteEval(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermite_eval(m, x));
    x += 1e-4;
    if (x > 3.0) x = -3.0;
  }
}
BENCHMARK(HermiteEval)->Arg(2)->Arg(8)->Arg(20);

static void HermiteCoefficients(benchmark::State& state) {
  const auto g = TestFunction::indicator_positive();
  for (auto _ : state)
    benchmark::DoNotOptimize(hermite_coefficients(g, 20, 200));
}
BENCHMARK(HermiteCoefficients);

static void ExactFieldDraw(benchmark::State& state) {
  const long side = state.range(0);
  const auto model = CovarianceModel::cauchy(2, 0.6);
  const ExactFieldSimulator sim(model, GridSpec::integer_lattice({side, side}));
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim.sample(1, rep++));
}
BENCHMARK(ExactFieldDraw)->Arg(8)->Arg(16)->Arg(32);

static void MsdTotalGap(benchmark::State& state) {
  MsdConfig cfg;
  cfg.model = CovarianceModel::cauchy(2, 0.6);
  cfg.g = WeightFunction::constant(2, 1.0);
  cfg.m = 1;
  const double T = static_cast<double>(state.range(0));
  cfg.T = {T, T};
  cfg.quad.points_per_unit = 2;
  for (auto _ : state) benchmark::DoNotOptimize(total_gap(cfg));
}
BENCHMARK(MsdTotalGap)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void KernelRect(benchmark::State& state) {
  const RectDomain dom({-1.0, -0.5}, {1.0, 0.7});
  std::vector<double> x = {0.3, -2.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_K_rect(x, dom));
    x[0] += 1e-3;
  }
}
BENCHMARK(KernelRect);

static void RosenblattDraws(benchmark::State& state) {
  const RectDomain dom({-1.0}, {1.0});
  SpectralModel sm{1, 0.3, SlowlyVarying::constant(1.0)};
  const auto disc = make_spectral_discretization(sm, 40.0, 128);
  const RosenblattSampler sampler(1, 0.3, dom, disc);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(1000, 7));
}
BENCHMARK(RosenblattDraws)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
