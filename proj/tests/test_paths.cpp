#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pdifmp/paths.hpp"

using namespace pdifmp;

namespace {

SimConfig grid(double h, std::uint64_t seed = 42) {
  SimConfig cfg;
  cfg.h = h;
  cfg.seed = seed;
  cfg.n_exercise = 1;
  return cfg;
}

PDifMPParams homogeneous(double lambda0) {
  PDifMPParams p;
  p.lambda0 = lambda0;
  p.eta = 0.0;
  p.alpha = 1e-6;
  return p;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("gbm with zero volatility grows deterministically") {
  MarketParams m;
  m.sigma = 0.0;
  const GbmPath path = simulate_gbm_path(m, 0.06, grid(1.0), 0);
  REQUIRE(path.prices.size() == 2);
  CHECK(path.prices[1] == doctest::Approx(36 * std::exp(0.06)).epsilon(1e-14));

  const GbmPath fine = simulate_gbm_path(m, 0.06, grid(0.02), 0);
  CHECK(fine.prices.back() == doctest::Approx(36 * std::exp(0.06)).epsilon(1e-12));
}

TEST_CASE("gbm path shape") {
  MarketParams m;
  const GbmPath path = simulate_gbm_path(m, 0.06, grid(1e-3), 5);
  REQUIRE(path.times.size() == 1001);
  REQUIRE(path.prices.size() == 1001);
  CHECK(path.times.front() == 0.0);
  CHECK(path.times.back() == 1.0);
  CHECK(path.prices.front() == m.s0);
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    CHECK(path.times[k] > path.times[k - 1]);
    CHECK(path.prices[k] > 0.0);
  }
  CHECK_THROWS_AS(simulate_gbm_path(m, 0.06, grid(0.3), 0), ConfigError);
}

TEST_CASE("gbm log increments have the lognormal moments") {
  MarketParams m;
  const double h = 0.02;
  std::vector<double> inc;
  for (std::size_t i = 0; i < 2000; ++i) {
    const GbmPath path = simulate_gbm_path(m, 0.06, grid(h), i);
    for (std::size_t k = 1; k < path.prices.size(); ++k) {
      inc.push_back(std::log(path.prices[k] / path.prices[k - 1]));
    }
  }
  const double n = static_cast<double>(inc.size());
  double mean = 0.0;
  for (double x : inc) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : inc) var += (x - mean) * (x - mean);
  var /= n - 1;
  const double target_var = m.sigma * m.sigma * h;
  CHECK(std::abs(mean - (0.06 - 0.02) * h) < 3 * std::sqrt(target_var / n));
  CHECK(std::abs(var - target_var) < 3 * target_var * std::sqrt(2.0 / n));
}

TEST_CASE("discounted gbm is a martingale when the drift equals r") {
  MarketParams m;
  const SimConfig cfg = grid(1.0);
  const std::size_t n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::exp(-m.r) * simulate_gbm_path(m, m.r, cfg, i).prices.back();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - m.s0) < 3 * se);
}

TEST_CASE("constant-rate clock matches the exponential inverse") {
  MarketParams m;
  const PDifMPParams p = homogeneous(2.0);
  const double h = 1e-3;
  PhiloxStream wiener(1, 0, StreamPurpose::Wiener);
  std::normal_distribution<double> normal;
  std::vector<double> prices{m.s0};
  const InterjumpResult r = advance_until_jump({m.s0, 0.06}, p, m.s0, m, h, 100000,
                                               -std::log(0.5), wiener, normal, prices);
  CHECK(r.jumped);
  CHECK(std::abs(r.waiting_time - std::log(2.0) / 2.0) <= h);
  CHECK(prices.size() == r.steps + 1);
}

TEST_CASE("zero rate never rings") {
  MarketParams m;
  const PDifMPParams p = homogeneous(0.0);
  PathStreams streams(3, 0);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> prices{m.s0};
    const InterjumpResult r = sample_interjump({m.s0, 0.06}, p, m.s0, m, 1e-3, 1000, streams,
                                               normal, prices);
    CHECK_FALSE(r.jumped);
    CHECK(r.steps == 1000);
  }
}

TEST_CASE("grid thinning brackets the clock threshold") {
  MarketParams m;
  PDifMPParams p;
  p.lambda0 = 0.5;
  p.eta = 0.4;
  p.beta = 1.0;
  std::normal_distribution<double> normal;
  for (std::uint64_t i = 0; i < 500; ++i) {
    PathStreams streams(9, i);
    // Replays the clock draw that sample_interjump will consume.
    PhiloxStream clock_copy = streams.clock;
    const double threshold = -std::log(uniform_open(clock_copy));
    std::vector<double> prices{m.s0};
    const InterjumpResult r =
        sample_interjump({m.s0, 0.06}, p, m.s0, m, 1e-3, 1u << 24, streams, normal, prices);
    REQUIRE(r.jumped);
    CHECK(r.hazard >= threshold);
    CHECK(r.hazard_before < threshold);
  }
}

TEST_CASE("homogeneous waiting times have mean 1/lambda0") {
  MarketParams m;
  const PDifMPParams p = homogeneous(5.0);
  std::normal_distribution<double> normal;
  const std::size_t n = 100000;
  std::vector<double> prices;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    PathStreams streams(17, i);
    prices.assign(1, m.s0);
    // Horizon far beyond any plausible draw, so nothing is censored.
    const InterjumpResult r =
        sample_interjump({m.s0, 0.06}, p, m.s0, m, 1e-3, 1u << 24, streams, normal, prices);
    REQUIRE(r.jumped);
    sum += r.waiting_time;
  }
  const double se = 0.2 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(sum / n - 0.2) < 3 * se);
}

TEST_CASE("pdifmp path invariants") {
  MarketParams m;
  PDifMPParams p = homogeneous(5.0);
  p.eta = 0.5;
  for (std::size_t i = 0; i < 200; ++i) {
    const PDifMPPath path = simulate_pdifmp_path(m, p, grid(1e-3), i);
    REQUIRE(path.prices.size() == 1001);
    REQUIRE(path.jump_times.size() == path.n_jumps + 1);
    REQUIRE(path.jump_indices.size() == path.n_jumps + 1);
    REQUIRE(path.drifts.size() == path.n_jumps + 1);
    CHECK(path.drifts.front() == p.mu0);
    CHECK(path.jump_times.back() == m.maturity);
    CHECK(path.jump_indices.back() == 1000);
    double previous = 0.0;
    for (std::size_t j = 0; j < path.jump_times.size(); ++j) {
      CHECK(path.jump_times[j] > previous);
      CHECK(path.jump_times[j] <= m.maturity);
      CHECK(path.times[path.jump_indices[j]] == path.jump_times[j]);
      previous = path.jump_times[j];
    }
    for (double s : path.prices) CHECK(s > 0.0);
  }
}

TEST_CASE("price is continuous across jumps") {
  // sigma = 0 makes each step a pure exp(mu h) factor, so a discontinuity
  // in S at a jump would show up as a wrong ratio.
  MarketParams m;
  m.sigma = 0.0;
  PDifMPParams p = homogeneous(20.0);
  p.alpha = 0.01;
  const double h = 1e-3;
  for (std::size_t i = 0; i < 20; ++i) {
    const PDifMPPath path = simulate_pdifmp_path(m, p, grid(h), i);
    REQUIRE(path.n_jumps > 0);
    std::size_t regime = 0;
    for (std::size_t k = 1; k < path.prices.size(); ++k) {
      const double ratio = path.prices[k] / path.prices[k - 1];
      CHECK(ratio == doctest::Approx(std::exp(path.drifts[regime] * h)).epsilon(1e-12));
      if (regime < path.n_jumps && path.jump_indices[regime] == k) ++regime;
    }
    CHECK(regime == path.n_jumps);
  }
}

TEST_CASE("homogeneous jump counts follow the Poisson law") {
  MarketParams m;
  const PDifMPParams p = homogeneous(5.0);
  const std::size_t n = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto count = static_cast<double>(simulate_pdifmp_path(m, p, grid(1e-3), i).n_jumps);
    sum += count;
    sum_sq += count * count;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  CHECK(std::abs(mean - 5.0) < 3 * std::sqrt(5.0 / n));
  // Var of the sample variance for Poisson(5): (mu4 - sigma^4) / n with mu4 = 80.
  CHECK(std::abs(var - 5.0) < 3 * std::sqrt(55.0 / n));
}

TEST_CASE("degenerate kernel reproduces constant-drift gbm") {
  MarketParams m;
  PDifMPParams p = homogeneous(5.0);
  p.alpha = 0.0;
  p.b = 1e-12;
  const std::size_t n = 10000;
  std::vector<double> pdifmp_logs, gbm_logs;
  for (std::size_t i = 0; i < n; ++i) {
    pdifmp_logs.push_back(std::log(simulate_pdifmp_path(m, p, grid(1e-3, 101), i).prices.back()));
    gbm_logs.push_back(std::log(simulate_gbm_path(m, p.mu0, grid(1e-3, 202), i).prices.back()));
  }
  const double d = ks_statistic(pdifmp_logs, gbm_logs);
  // Asymptotic two-sample critical value at the 1% level.
  CHECK(d < 1.628 * std::sqrt(2.0 / n));
}

TEST_CASE("streams make paths independent of jump counts") {
  // The Wiener stream is keyed by path, so with no kernel effect the same
  // path index yields the same prices whatever the jump rate.
  MarketParams m;
  PDifMPParams slow = homogeneous(0.1);
  PDifMPParams fast = homogeneous(30.0);
  slow.b = fast.b = 1e-12;
  slow.alpha = fast.alpha = 0.0;
  const PDifMPPath a = simulate_pdifmp_path(m, slow, grid(1e-3), 4);
  const PDifMPPath b = simulate_pdifmp_path(m, fast, grid(1e-3), 4);
  CHECK(a.n_jumps < b.n_jumps);
  CHECK(a.prices.back() == doctest::Approx(b.prices.back()).epsilon(1e-9));
}

TEST_CASE("sample on grid") {
  SUBCASE("every fine step an exercise date") {
    MarketParams m;
    std::vector<GbmPath> paths;
    for (std::size_t i = 0; i < 3; ++i) paths.push_back(simulate_gbm_path(m, 0.06, grid(0.1), i));
    const PathMatrix mat = sample_on_grid(std::span<const GbmPath>(paths), 10);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 10; ++k) CHECK(mat.at(i, k) == paths[i].prices[k + 1]);
    }
    CHECK(mat.exercise_times.back() == 1.0);
    CHECK(mat.exercise_times.front() == doctest::Approx(0.1));
  }
  SUBCASE("flags") {
    GbmPath flat{{0, 0.5, 1}, {36, 36, 36}};
    GbmPath spike{{0, 0.5, 1}, {36, 3.2 * 36, 36}};
    const std::vector<GbmPath> paths{flat, spike};
    const PathMatrix mat = sample_on_grid(std::span<const GbmPath>(paths), 2);
    CHECK(mat.flags[0] == 0);
    CHECK(mat.flags[1] == 1);
    CHECK(mat.flagged_count() == 1);
  }
  SUBCASE("off-grid exercise dates") {
    GbmPath flat{{0, 0.5, 1}, {36, 36, 36}};
    const std::vector<GbmPath> paths{flat};
    CHECK_THROWS_AS(sample_on_grid(std::span<const GbmPath>(paths), 3), ConfigError);
  }
}
