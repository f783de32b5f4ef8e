#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "genstream/simulator.hpp"

using namespace genstream;

namespace {

SchemeParams make(SchemeKind k, std::uint32_t g, double eps, unsigned field_bits = 1) {
  SchemeParams p;
  p.scheme = k;
  p.g = g;
  p.field_bits = field_bits;
  p.channel.epsilon = eps;
  return p;
}

}  // namespace

TEST_CASE("same seed reproduces the trial exactly") {
  auto data = make_test_payload(16 * 24, 1);
  Simulator sim(make(SchemeKind::rls, 4, 0.25), data, 24);
  TrialRecord a = sim.run_trial(123);
  TrialRecord b = sim.run_trial(123);
  CHECK(a.T == b.T);
  CHECK(a.received_count == b.received_count);
  CHECK(a.superfluous_count == b.superfluous_count);
  CHECK(a.per_generation_M == b.per_generation_M);
  CHECK(a.file_verified);
  TrialRecord c = sim.run_trial(124);
  CHECK((c.T != a.T || c.received_count != a.received_count ||
         c.per_generation_M != a.per_generation_M));
}

TEST_CASE("lossless channel needs exactly one transmission per block") {
  auto data = make_test_payload(16 * 32, 2);
  for (SchemeKind k : {SchemeKind::rls, SchemeKind::rs, SchemeKind::pc, SchemeKind::rep}) {
    Simulator sim(make(k, 4, 0.0), data, 32);
    CHECK(sim.layout().N == 16);
    for (std::uint64_t seed : {1, 2, 3}) {
      TrialRecord rec = sim.run_trial(seed);
      CHECK(rec.T == 16);
      CHECK(rec.received_count == 16);
      CHECK(rec.superfluous_count == 0);
      CHECK(rec.file_verified);
      for (auto m : rec.per_generation_M) CHECK(m == 4);
    }
  }
}

TEST_CASE("binary single-block random coding is geometric with success 1/2") {
  auto data = make_test_payload(64, 3);
  Simulator sim(make(SchemeKind::rl, 1, 0.0), data, 64);
  BatchStats stats = sim.run_batch(20000, 900);
  // mean 2, variance 2: 3 sigma over 2e4 trials
  CHECK(std::abs(stats.mean_T - 2.0) < 3.0 * std::sqrt(2.0 / 20000.0));
  CHECK(stats.mean_loss_rate == 0.0);
}

TEST_CASE("channel calibration: empirical loss rate tracks epsilon") {
  Rng rng(4242);
  const double eps = 0.3;
  const int draws = 1000000;
  int lost = 0;
  for (int i = 0; i < draws; ++i)
    if (rng.bernoulli(eps)) ++lost;
  double sigma = std::sqrt(eps * (1 - eps) / draws);
  CHECK(std::abs(double(lost) / draws - eps) < 3 * sigma);
}

TEST_CASE("simulated means agree with the analytic expectation") {
  struct Point {
    SchemeKind k;
    std::uint32_t g;
    double eps;
  };
  for (auto pt : {Point{SchemeKind::rl, 2, 0.15}, Point{SchemeKind::rls, 4, 0.3},
                  Point{SchemeKind::rs, 4, 0.3}, Point{SchemeKind::pc, 4, 0.1},
                  Point{SchemeKind::rep, 2, 0.2}}) {
    auto params = make(pt.k, pt.g, pt.eps);
    auto data = make_test_payload(16 * 16, 5);
    Simulator sim(params, data, 16);
    BatchStats stats = sim.run_batch(4000, 77);
    auto expect = analysis::expected_T(sim.params());
    INFO(to_string(pt.k), " g=", pt.g, " eps=", pt.eps);
    CHECK(std::abs(stats.mean_T - expect.value) <= 3.0 * stats.ci95_halfwidth);
    CHECK(expect.lower_bound < expect.value + 1e-9);
    CHECK(expect.value <= expect.upper_bound + 1e-9);
  }
}

TEST_CASE("systematic phase does not increase the delivery count") {
  auto data = make_test_payload(16 * 16, 6);
  for (std::uint32_t g : {1u, 4u}) {
    Simulator rl(make(SchemeKind::rl, g, 0.15), data, 16);
    Simulator rls(make(SchemeKind::rls, g, 0.15), data, 16);
    BatchStats a = rl.run_batch(3000, 10);
    BatchStats b = rls.run_batch(3000, 10);
    CHECK(b.mean_T <= a.mean_T + 3.0 * (a.ci95_halfwidth + b.ci95_halfwidth));
  }
}

TEST_CASE("empirical cdf against the analytic delivery distribution") {
  auto data = make_test_payload(16 * 8, 7);

  SUBCASE("degenerate lossless case has zero deviation") {
    Simulator sim(make(SchemeKind::rls, 4, 0.0), data, 8);
    BatchStats stats = sim.run_batch(500, 20);
    CHECK(empirical_cdf_max_deviation(stats, sim.params()) == 0.0);
  }

  SUBCASE("matched prediction stays below the DKW band") {
    Simulator sim(make(SchemeKind::rls, 4, 0.15), data, 8);
    BatchStats stats = sim.run_batch(20000, 21);
    double dev = empirical_cdf_max_deviation(stats, sim.params());
    CHECK(dev < dkw_threshold(stats.trials, 0.01));
  }

  SUBCASE("mismatched prediction is detected") {
    Simulator sim(make(SchemeKind::rls, 4, 0.15), data, 8);
    BatchStats stats = sim.run_batch(20000, 22);
    SchemeParams wrong = sim.params();
    wrong.channel.epsilon = 0.30;
    double dev = empirical_cdf_max_deviation(stats, wrong);
    CHECK(dev > dkw_threshold(stats.trials, 0.01));
  }

  SUBCASE("threshold arithmetic") {
    CHECK(dkw_threshold(100000, 0.01) == doctest::Approx(0.0051522).epsilon(1e-4));
  }
}

TEST_CASE("superfluous receptions are the decoded-generation and dependent arrivals") {
  auto data = make_test_payload(16 * 16, 8);
  Simulator sim(make(SchemeKind::rep, 4, 0.3), data, 16);
  TrialRecord rec = sim.run_trial(5);
  CHECK(rec.received_count <= rec.T);
  // everything beyond the N necessary receptions is superfluous
  CHECK(rec.superfluous_count == rec.received_count - sim.layout().N);
}
