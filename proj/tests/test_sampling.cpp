#include <doctest.h>

#include "gsq/errors.hpp"
#include "gsq/math_util.hpp"
#include "gsq/sampling.hpp"

#include "test_helpers.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace gsq;

TEST_SUITE_BEGIN("sampling");

TEST_CASE("increment covariance closed-form values") {
  // Independent increments for the square-root input.
  CHECK(increment_covariance(VarianceModel::fbm(0.5), 1.0, 3) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(increment_covariance(VarianceModel::fbm(0.5), 1.0, 0) == doctest::Approx(1.0));
  // Degenerate index 1: constant increments, covariance 1 at every lag.
  CHECK(increment_covariance(VarianceModel::fbm(1.0), 1.0, 2) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // 0.5 * (2^{1.5} - 2) at lag one for index 0.75.
  CHECK(increment_covariance(VarianceModel::fbm(0.75), 1.0, 1) ==
        doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)).epsilon(1e-12));
}

TEST_CASE("srd increment covariance: cell integral equals second difference") {
  VarianceModel m = VarianceModel::srd_integrated(SrdCorrelation::exp_power(1.0));
  double delta = 0.25;
  for (std::size_t lag : {3u, 5u, 9u, 20u}) {
    double t = double(lag) * delta;
    double second_diff = 0.5 * (m.sigma2(t + delta) - 2 * m.sigma2(t) + m.sigma2(t - delta));
    CHECK(increment_covariance(m, delta, lag) ==
          doctest::Approx(second_diff).epsilon(1e-6));
  }
}

TEST_CASE("assemble_path basics and compensated total") {
  GridSpec grid(1.0, 4);
  SampledPath p = assemble_path({1.0, 1.0, 1.0}, grid);
  CHECK(p.x == std::vector<double>{0, 1, 2, 3});

  SampledPath z = assemble_path({0.0, 0.0, 0.0}, grid);
  for (double v : z.x) CHECK(v == 0.0);

  std::mt19937_64 eng(7);
  std::normal_distribution<double> nd;
  std::vector<double> inc(20001);
  for (auto& v : inc) v = nd(eng) * 1e6 + 0.1;
  GridSpec g2(0.5, inc.size() + 1);
  SampledPath big = assemble_path(inc, g2);
  long double oracle = 0.0L;
  for (double v : inc) oracle += v;
  CHECK(std::abs(big.x.back() - double(oracle)) <=
        1e-15 * std::abs(double(oracle)) + 1e-12);
}

TEST_CASE("sampling is deterministic in (seed, grid, model)") {
  VarianceModel m = VarianceModel::fbm(0.75);
  GridSpec grid(0.1, 257);
  IncrementSampler s(m, grid);
  auto a = s.sample(12345);
  auto b = s.sample(12345);
  CHECK(a == b);
  auto c = s.sample(12346);
  CHECK(a != c);
}

TEST_CASE("spectral sampler matches increment covariance empirically") {
  VarianceModel m = VarianceModel::fbm(0.75);
  GridSpec grid(1.0, 513);
  IncrementSampler s(m, grid);
  CHECK(s.method() == SamplerMethod::Spectral);
  CHECK(s.embedding_size() == 1024);

  const int reps = 400;
  auto ws = s.make_workspace();
  std::vector<double> inc;
  double lag1 = 0, var = 0;
  for (int r = 0; r < reps; ++r) {
    s.sample_into(replica_seed(99, 7, std::uint64_t(r)), ws, inc);
    double s1 = 0, s0 = 0;
    for (std::size_t i = 0; i + 1 < inc.size(); ++i) s1 += inc[i] * inc[i + 1];
    for (double v : inc) s0 += v * v;
    lag1 += s1 / double(inc.size() - 1);
    var += s0 / double(inc.size());
  }
  lag1 /= reps;
  var /= reps;
  double rho = lag1 / var;
  // lag-1 correlation 2^{1.5}/2 - 1 within a few standard errors
  CHECK(rho == doctest::Approx(std::pow(2.0, 1.5) / 2.0 - 1.0).epsilon(0.05));
}

TEST_CASE("iid increments for the independent-increment input pass a z-test") {
  VarianceModel m = VarianceModel::fbm(0.5);
  GridSpec grid(1.0, 1 << 16);
  IncrementSampler s(m, grid);
  auto inc = s.sample(2024);
  double n = double(inc.size());
  double mean = std::accumulate(inc.begin(), inc.end(), 0.0) / n;
  double var = 0;
  for (double v : inc) var += (v - mean) * (v - mean);
  var /= (n - 1);
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(n));               // mean 0, sd 1
  CHECK(std::abs(var - 1.0) <= 4.0 * std::sqrt(2.0 / n));    // chi-square spread
}

TEST_CASE("srd path variance matches the symbolic variance") {
  VarianceModel m = VarianceModel::srd_integrated(SrdCorrelation::exp_power(1.0));
  GridSpec grid(0.1, 101); // horizon 10
  IncrementSampler s(m, grid);
  auto ws = s.make_workspace();
  const int reps = 20000;
  double acc = 0, acc2 = 0;
  std::vector<double> inc;
  for (int r = 0; r < reps; ++r) {
    s.sample_into(replica_seed(3, 11, std::uint64_t(r)), ws, inc);
    double x = compensated_total(inc);
    acc += x * x;
    acc2 += x * x * x * x;
  }
  double est = acc / reps;
  double se = std::sqrt((acc2 / reps - est * est) / reps);
  double expected = 2.0 * (10.0 + std::exp(-10.0) - 1.0);
  CHECK(std::abs(est - expected) <= 3.5 * se);
}

TEST_CASE("increment variance over disjoint spans matches sigma2 of the gap") {
  VarianceModel m = VarianceModel::fbm(0.75);
  GridSpec grid(0.25, 9); // X sampled at 0, 0.25, ..., 2
  IncrementSampler s(m, grid);
  auto ws = s.make_workspace();
  std::vector<double> inc;
  const int reps = 20000;
  double acc = 0, acc2 = 0;
  for (int r = 0; r < reps; ++r) {
    s.sample_into(replica_seed(4, 44, std::uint64_t(r)), ws, inc);
    // X(2) - X(0.5) = sum of increments 2..7
    double d = 0;
    for (int j = 2; j < 8; ++j) d += inc[j];
    acc += d * d;
    acc2 += d * d * d * d;
  }
  double est = acc / reps;
  double se = std::sqrt((acc2 / reps - est * est) / reps);
  CHECK(std::abs(est - m.sigma2(1.5)) <= 3.5 * se);
}

TEST_CASE("degenerate index 1 draws are linear paths") {
  VarianceModel m = VarianceModel::fbm(1.0);
  GridSpec grid(0.5, 65);
  IncrementSampler s(m, grid);
  auto inc = s.sample(31);
  for (std::size_t i = 1; i < inc.size(); ++i)
    CHECK(inc[i] == doctest::Approx(inc[0]).epsilon(1e-12));
}

TEST_CASE("toeplitz fallback agrees with the spectral path in law") {
  VarianceModel m = VarianceModel::fbm(0.3);
  GridSpec grid(1.0, 65);
  IncrementSampler toe(m, grid, SamplerMethod::Toeplitz);
  CHECK(toe.method() == SamplerMethod::Toeplitz);
  auto ws = toe.make_workspace();
  std::vector<double> inc;
  const int reps = 4000;
  double var = 0, lag1 = 0;
  for (int r = 0; r < reps; ++r) {
    toe.sample_into(replica_seed(17, 3, std::uint64_t(r)), ws, inc);
    for (double v : inc) var += v * v;
    for (std::size_t i = 0; i + 1 < inc.size(); ++i) lag1 += inc[i] * inc[i + 1];
  }
  var /= double(reps) * double(inc.size());
  lag1 /= double(reps) * double(inc.size() - 1);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
  CHECK(lag1 / var ==
        doctest::Approx(0.5 * (std::pow(2.0, 0.6) - 2.0)).epsilon(0.12));
}

TEST_CASE("toeplitz fallback refuses oversized requests") {
  VarianceModel m = VarianceModel::fbm(0.3);
  GridSpec grid(1.0, (1 << 14) + 2);
  CHECK_THROWS_AS(IncrementSampler(m, grid, SamplerMethod::Toeplitz), CapacityError);
}

TEST_CASE("self-similar rescaling leaves the marginal law invariant (KS)") {
  // X(2t)/2^H versus X(t) at matching grid times, via independent streams.
  VarianceModel m = VarianceModel::fbm(0.75);
  const int reps = 4000;
  GridSpec fine(1.0 / 128, 129), coarse(1.0 / 64, 129);
  IncrementSampler sf(m, fine), sc(m, coarse);
  auto wf = sf.make_workspace(), wc = sc.make_workspace();
  std::vector<double> a(reps), b(reps), inc;
  for (int r = 0; r < reps; ++r) {
    sf.sample_into(replica_seed(1, 100, std::uint64_t(r)), wf, inc);
    a[r] = compensated_total(inc); // X(1)
    sc.sample_into(replica_seed(2, 200, std::uint64_t(r)), wc, inc);
    b[r] = compensated_total(inc) / std::pow(2.0, 0.75); // X(2)/2^H
  }
  // two-sample KS at the 1% level
  CHECK(gsq_test::ks_distance(a, b) <= gsq_test::ks_critical_1pct(reps));
}

TEST_SUITE_END();
