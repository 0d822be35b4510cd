#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lrf/errors.hpp"
#include "lrf/fieldsim.hpp"
#include "lrf/functionals.hpp"

using namespace lrf;

namespace {

FieldSample zero_field(const GridSpec& grid) {
  return FieldSample::injected(grid, std::vector<double>(grid.total(), 0.0));
}

}  // namespace

TEST_CASE("weighted sum on the zero field") {
  const GridSpec grid = GridSpec::integer_lattice({3, 4});
  const FieldSample f = zero_field(grid);
  const auto g = WeightFunction::constant(2, 1.0);
  CHECK(weighted_sum_functional(f, g, 1, {3, 4}) == 0.0);
  // H_2(0) = -1 at every lattice point
  CHECK(weighted_sum_functional(f, g, 2, {3, 4}) == -12.0);
}

TEST_CASE("weighted sum with the product weight: enumeration oracle") {
  const GridSpec grid = GridSpec::integer_lattice({2, 2});
  std::vector<double> vals = {0.3, -1.2, 0.7, 2.5};  // v(0,0), v(0,1), v(1,0), v(1,1)
  const FieldSample f = FieldSample::injected(grid, vals);
  const auto g = WeightFunction::power({1.0, 1.0});
  // g(i,j) = i*j kills everything except (1,1)
  CHECK(weighted_sum_functional(f, g, 1, {2, 2}) == doctest::Approx(2.5));

  // full enumeration oracle with a nontrivial weight
  const auto glog = WeightFunction::power_log({2.0, 3.0});
  double oracle = 0.0;
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 2; ++j)
      oracle += (i * std::log(2.0 + i)) * (j * std::log(3.0 + j)) *
                vals[static_cast<std::size_t>(i * 2 + j)];
  CHECK(weighted_sum_functional(f, glog, 1, {2, 2}) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("weighted sum coverage errors") {
  const GridSpec grid = GridSpec::integer_lattice({2, 2});
  const FieldSample f = zero_field(grid);
  const auto g = WeightFunction::constant(2, 1.0);
  CHECK_THROWS_AS(weighted_sum_functional(f, g, 1, {3, 2}), std::invalid_argument);
}

TEST_CASE("weighted integral on the zero field") {
  const auto g = WeightFunction::constant(2, 1.0);
  for (int q : {1, 2, 4}) {
    const GridSpec grid = GridSpec::midpoint_grid({2.0, 2.0}, q);
    const FieldSample f = zero_field(grid);
    CHECK(weighted_integral_functional(f, g, 1, {2.0, 2.0}, q) == 0.0);
    CHECK(weighted_integral_functional(f, g, 2, {2.0, 2.0}, q) ==
          doctest::Approx(-4.0).epsilon(1e-14));
  }
}

TEST_CASE("q=1 integral equals the midpoint-shifted sum: enumeration oracle") {
  const GridSpec grid = GridSpec::midpoint_grid({3.0, 3.0}, 1);
  std::vector<double> vals(grid.total());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 0.1 * static_cast<double>(i) - 0.4;
  const FieldSample f = FieldSample::injected(grid, vals);
  const auto g = WeightFunction::constant(2, 1.0);
  double oracle = 0.0;
  for (double v : vals) oracle += v;  // cell volume 1, H_1 = id
  CHECK(weighted_integral_functional(f, g, 1, {3.0, 3.0}, 1) ==
        doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("normalizer arithmetic and the long-range guard") {
  const auto L1 = SlowlyVarying::constant(1.0);
  CHECK(normalizer(2, 1, 1.0, L1, WeightFunction::constant(2, 1.0), 4.0) ==
        doctest::Approx(8.0).epsilon(1e-14));
  CHECK(normalizer(2, 2, 0.6, L1, WeightFunction::constant(2, 1.0), 10.0) ==
        doctest::Approx(std::pow(10.0, 1.4)).epsilon(1e-14));
  CHECK(normalizer(1, 2, 0.4, L1, WeightFunction::power({1.0}), 100.0) ==
        doctest::Approx(std::pow(100.0, 1.6)).epsilon(1e-14));
  CHECK_THROWS_AS(normalizer(2, 2, 1.0, L1, WeightFunction::constant(2, 1.0), 4.0),
                  long_range_violation);
}

TEST_CASE("theorem1 pair: G its own Hermite term") {
  const GridSpec grid = GridSpec::midpoint_grid({2.0}, 2);
  std::vector<double> vals(grid.total());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::sin(0.7 * i) * 1.3;
  const FieldSample f = FieldSample::injected(grid, vals);

  SUBCASE("G = H_2") {
    const auto g = TestFunction::custom([](double x) { return x * x - 1.0; });
    const Theorem1Pair p = theorem1_pair(g, 2, f, {2.0}, 2);
    CHECK(p.K_r == doctest::Approx(p.K_r_kappa).epsilon(1e-12));
  }
  SUBCASE("G = x^2: same thing shifted by C_0") {
    const Theorem1Pair p = theorem1_pair(TestFunction::monomial(2), 2, f, {2.0}, 2);
    CHECK(std::abs(p.K_r - p.K_r_kappa) < 1e-12 * std::max(1.0, std::abs(p.K_r)));
  }
  SUBCASE("zero field: both reduce to -|domain|") {
    const FieldSample z = zero_field(grid);
    const Theorem1Pair p = theorem1_pair(TestFunction::monomial(2), 2, z, {2.0}, 2);
    CHECK(p.K_r == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(p.K_r_kappa == doctest::Approx(-2.0).epsilon(1e-13));
  }
  SUBCASE("rank mismatch is rejected") {
    CHECK_THROWS_AS(theorem1_pair(TestFunction::monomial(2), 1, f, {2.0}, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("weight limit gap") {
  // exact homogeneity, up to pow() rounding
  CHECK(weight_limit_gap(WeightFunction::power({1.0, 2.0}), 7.0, 51) < 1e-14);
  CHECK(weight_limit_gap(WeightFunction::constant(2, 3.0), 7.0, 51) == 0.0);
  const auto glog = WeightFunction::power_log({2.718281828459045, 2.718281828459045});
  const double g10 = weight_limit_gap(glog, 10.0, 51);
  const double g100 = weight_limit_gap(glog, 100.0, 51);
  const double g1000 = weight_limit_gap(glog, 1000.0, 51);
  CHECK(g100 < g10);
  CHECK(g1000 < g100);
}

TEST_CASE("sum functional is additive over superposed fields at m=1") {
  const GridSpec grid = GridSpec::integer_lattice({4, 3});
  std::vector<double> a(grid.total()), b(grid.total()), ab(grid.total());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = 0.2 * i;
    b[i] = std::cos(static_cast<double>(i));
    ab[i] = a[i] + b[i];
  }
  const auto g = WeightFunction::power({1.0, 1.0});
  const double sa = weighted_sum_functional(FieldSample::injected(grid, a), g, 1, {4, 3});
  const double sb = weighted_sum_functional(FieldSample::injected(grid, b), g, 1, {4, 3});
  const double sab = weighted_sum_functional(FieldSample::injected(grid, ab), g, 1, {4, 3});
  CHECK(sab == doctest::Approx(sa + sb).epsilon(1e-12));
}

TEST_CASE("scaling the weight leaves the normalized value invariant") {
  const GridSpec grid = GridSpec::integer_lattice({5});
  std::vector<double> vals(grid.total());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 0.3 * i - 0.7;
  const FieldSample f = FieldSample::injected(grid, vals);
  const auto L = SlowlyVarying::constant(1.0);

  const auto g1 = WeightFunction::constant(1, 1.0);
  const auto g5 = WeightFunction::constant(1, 5.0);
  const double r1 = weighted_sum_functional(f, g1, 1, {5});
  const double r5 = weighted_sum_functional(f, g5, 1, {5});
  CHECK(r5 == doctest::Approx(5.0 * r1).epsilon(1e-13));
  const double n1 = normalizer(1, 1, 0.5, L, g1, 5.0);
  const double n5 = normalizer(1, 1, 0.5, L, g5, 5.0);
  CHECK(r5 / n5 == doctest::Approx(r1 / n1).epsilon(1e-13));
}

TEST_CASE("normalized sum variance stays in a band along the T ladder") {
  // g = 1, m = 1, n = 2, alpha = 0.6: Var(X~*) should stay within a factor
  // 3 band across T in {8, 16, 32}.
  const auto model = CovarianceModel::cauchy(2, 0.6);
  const auto g = WeightFunction::constant(2, 1.0);
  std::vector<double> variances;
  for (long T : {8L, 16L, 32L}) {
    const GridSpec grid = GridSpec::integer_lattice({T, T});
    ExactFieldSimulator sim(model, grid);
    double acc = 0.0, acc2 = 0.0;
    const long reps = 500;
    for (long r = 0; r < reps; ++r) {
      const FieldSample f = sim.sample(31, r);
      const double d = normalizer(2, 1, 0.6, model.L, g, static_cast<double>(T));
      const double x = weighted_sum_functional(f, g, 1, {T, T}) / d;
      acc += x;
      acc2 += x * x;
    }
    variances.push_back(acc2 / reps - (acc / reps) * (acc / reps));
  }
  double lo = variances[0], hi = variances[0];
  for (double v : variances) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 3.0);
}
