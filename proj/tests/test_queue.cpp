#include <doctest.h>

#include "gsq/errors.hpp"
#include "gsq/math_util.hpp"
#include "gsq/queue.hpp"

#include "test_helpers.hpp"

#include <cmath>

using namespace gsq;

TEST_SUITE_BEGIN("queue");

TEST_CASE("reflection recursion on hand-rolled inputs") {
  GridSpec grid(1.0, 4);
  SampledPath zero = assemble_path({0, 0, 0}, grid);
  QueuePath q0 = reflect_lindley(zero, 1.0, 0.0);
  for (double v : q0.q) CHECK(v == 0.0);

  SampledPath p = assemble_path({2, -3, 2}, grid);
  QueuePath q = reflect_lindley(p, 1.0, 0.0);
  CHECK(q.q == std::vector<double>{0, 1, 0, 1});

  GridSpec g8(1.0, 8);
  SampledPath drainp = assemble_path(std::vector<double>(7, 0.0), g8);
  QueuePath drain = reflect_lindley(drainp, 1.0, 5.0);
  CHECK(drain.q == std::vector<double>{5, 4, 3, 2, 1, 0, 0, 0});

  CHECK_THROWS_AS(reflect_lindley(p, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(reflect_lindley(p, -1.0, 0.0), DomainError);
}

TEST_CASE("oracle equivalence: recursion equals double-loop supremum") {
  for (double H : {0.3, 0.5, 0.75}) {
    VarianceModel m = VarianceModel::fbm(H);
    GridSpec grid(0.01, 1000);
    IncrementSampler s(m, grid);
    auto ws = s.make_workspace();
    std::vector<double> inc;
    for (int rep = 0; rep < 12; ++rep) {
      s.sample_into(replica_seed(404, 1, std::uint64_t(rep)), ws, inc);
      SampledPath p = assemble_path(inc, grid);
      QueuePath lind = reflect_lindley(p, 1.0, 0.0);
      QueuePath brut = brute_force_sup(p, 1.0);
      double worst = 0;
      for (std::size_t k = 0; k < p.x.size(); ++k)
        worst = std::max(worst, std::abs(lind.q[k] - brut.q[k]));
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("brute force on a deterministic ramp") {
  // X(t) = 2 c t gives Q(t) = c (t - t0).
  GridSpec grid(0.5, 21);
  std::vector<double> inc(20, 2.0 * 1.0 * 0.5);
  SampledPath p = assemble_path(inc, grid);
  QueuePath q = brute_force_sup(p, 1.0);
  for (std::size_t k = 0; k < q.q.size(); ++k)
    CHECK(q.q[k] == doctest::Approx(0.5 * double(k)).epsilon(1e-12));

  GridSpec single(1.0, 2);
  SampledPath one = assemble_path({0.0}, single);
  CHECK(brute_force_sup(one, 1.0).q[0] == 0.0);
}

TEST_CASE("queue is monotone in q0 and antitone in c on shared noise") {
  VarianceModel m = VarianceModel::fbm(0.5);
  GridSpec grid(0.05, 400);
  IncrementSampler s(m, grid);
  auto inc = s.sample(5150);
  SampledPath p = assemble_path(inc, grid);
  QueuePath lo = reflect_lindley(p, 1.0, 0.0);
  QueuePath hi = reflect_lindley(p, 1.0, 2.0);
  QueuePath fast = reflect_lindley(p, 2.0, 0.0);
  for (std::size_t k = 0; k < p.x.size(); ++k) {
    CHECK(hi.q[k] >= lo.q[k]);
    CHECK(fast.q[k] <= lo.q[k]);
  }
}

TEST_CASE("hitting time and burn-in rule") {
  // sigma(t) = sqrt(t) crosses c t at t = 1/c^2... c = 1 gives 1.
  VarianceModel m = VarianceModel::fbm(0.5);
  CHECK(hitting_time(m, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(burn_in_rule(m, 1.0) == doctest::Approx(20.0).epsilon(1e-9));
  // General index: t^H = c t at t = c^{-1/(1-H)}.
  VarianceModel m75 = VarianceModel::fbm(0.75);
  CHECK(hitting_time(m75, 2.0) == doctest::Approx(std::pow(2.0, -4.0)).epsilon(1e-9));
  // Integrated input at c = 1 never dominates drift; the 5x fallback applies.
  VarianceModel srd = VarianceModel::srd_integrated(SrdCorrelation::exp_power(1.0));
  CHECK(hitting_time(srd, 1.0) > 0.0);
}

TEST_CASE("heavy drift drains the stationary queue") {
  VarianceModel m = VarianceModel::fbm(0.5);
  int zero = 0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    QueuePath q = stationary_queue(m, 100.0, 0.5, 0.01, replica_seed(7, 70, r));
    if (q.q[0] == 0.0) ++zero;
  }
  CHECK(double(zero) / reps > 0.95);
}

TEST_CASE("stationarity: start and end marginals agree (KS at 1%)") {
  VarianceModel m = VarianceModel::fbm(0.5);
  const int reps = 4000;
  std::vector<double> q0(reps), qT(reps), qmid(reps);
  for (int r = 0; r < reps; ++r) {
    QueuePath q = stationary_queue(m, 1.0, 6.0, 1.0 / 32, replica_seed(8, 80, r));
    q0[r] = q.q.front();
    qT[r] = q.q.back();
    qmid[r] = q.q[q.q.size() / 2];
  }
  double crit = gsq_test::ks_critical_1pct(reps);
  CHECK(gsq_test::ks_distance(q0, qT) <= crit);
  CHECK(gsq_test::ks_distance(qmid, qT) <= crit); // shift by half the horizon
}

TEST_CASE("short burn-in is a warning, not an error") {
  VarianceModel m = VarianceModel::fbm(0.5);
  StationaryQueueOptions opts;
  opts.burn_in = 0.5;
  QueuePath q = stationary_queue(m, 1.0, 1.0, 0.125, 1, opts);
  CHECK(!q.warning.empty());
  QueuePath ok = stationary_queue(m, 1.0, 1.0, 0.125, 1);
  CHECK(ok.warning.empty());
}

TEST_CASE("last passage on hand-rolled queues") {
  GridSpec grid(1.0, 4);
  SampledPath p = assemble_path({2, -3, 2}, grid);
  QueuePath q = reflect_lindley(p, 1.0, 0.0); // 0 1 0 1

  double cps[] = {2.0};
  CrossingRecord rec = last_passage(q, [](double) { return 0.5; }, cps);
  REQUIRE(rec.checkpoints.size() == 1);
  REQUIRE(rec.checkpoints[0].xi.has_value());
  CHECK(*rec.checkpoints[0].xi == doctest::Approx(1.0));

  // Zero boundary: the queue is always at or above it.
  double cps3[] = {0.0, 1.0, 3.0};
  CrossingRecord zero = last_passage(q, [](double) { return 0.0; }, cps3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(zero.checkpoints[i].xi.has_value());
    CHECK(*zero.checkpoints[i].xi == doctest::Approx(cps3[i]));
  }

  // Unreachable boundary: no crossing anywhere.
  CrossingRecord none = last_passage(q, [](double) { return 1e9; }, cps3);
  for (const auto& cp : none.checkpoints) CHECK_FALSE(cp.xi.has_value());

  CHECK_THROWS_AS(last_passage(q, [](double t) { return 1.0 - 0.3 * t; }, cps3),
                  ModelValidationError);
}

TEST_CASE("last passage times are nondecreasing and bounded by the checkpoint") {
  VarianceModel m = VarianceModel::fbm(0.5);
  QueuePath q = stationary_queue(m, 1.0, 50.0, 1.0 / 16, 909);
  std::vector<double> cps{5, 10, 20, 30, 40, 50};
  CrossingRecord rec = last_passage(q, [](double) { return 0.4; }, cps);
  double prev = -1;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (!rec.checkpoints[i].xi) continue;
    CHECK(*rec.checkpoints[i].xi <= cps[i] + 1e-12);
    CHECK(*rec.checkpoints[i].xi >= prev);
    prev = *rec.checkpoints[i].xi;
  }
}

TEST_SUITE_END();
