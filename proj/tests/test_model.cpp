#include <cmath>
#include <vector>

#include "doctest.h"
#include "pdifmp/model.hpp"
#include "pdifmp/rng.hpp"

using namespace pdifmp;

namespace {

PDifMPParams rate_params(double lambda0, double eta, double beta) {
  PDifMPParams p;
  p.lambda0 = lambda0;
  p.eta = eta;
  p.beta = beta;
  return p;
}

}  // namespace

TEST_CASE("jump rate") {
  CHECK(jump_rate({44, 0.06}, rate_params(5, 0.5, 0), 40) == doctest::Approx(7.0));
  for (double s : {1.0, 36.0, 40.0, 120.0}) {
    CHECK(jump_rate({s, 0.06}, rate_params(5, 0, 0), 40) == 5.0);
  }
  CHECK(jump_rate({42, 0.06}, rate_params(1, 1, 5), 40) == 1.0);
  // Symmetric around delta and dead inside the buffer zone.
  CHECK(jump_rate({34, 0.0}, rate_params(1, 1, 5), 40) == doctest::Approx(2.0));
  CHECK(jump_rate({46, 0.0}, rate_params(1, 1, 5), 40) == doctest::Approx(2.0));
}

TEST_CASE("jump rate never drops below lambda0 and grows with distance") {
  const PDifMPParams p = rate_params(0.4, 0.3, 1.5);
  double previous = 0.0;
  for (double gap = 0.0; gap < 30.0; gap += 0.25) {
    const double up = jump_rate({40 + gap, 0.0}, p, 40);
    const double down = jump_rate({std::max(40 - gap, 1e-6), 0.0}, p, 40);
    CHECK(up >= p.lambda0);
    CHECK(down >= p.lambda0);
    CHECK(up >= previous);
    previous = up;
  }
}

TEST_CASE("laplace location") {
  PDifMPParams p;
  p.mu0 = 0.06;
  p.alpha = 0.01;
  CHECK(laplace_location(38, p, 36) == doctest::Approx(0.08));
  CHECK(laplace_location(36, p, 36) == 0.06);
  p.alpha = 0.0;
  CHECK(laplace_location(90, p, 36) == 0.06);
}

TEST_CASE("laplace quantile") {
  PDifMPParams p;
  p.mu0 = 0.06;
  p.alpha = 0.0;
  p.b = 0.01;
  CHECK(sample_drift(36, p, 36, 0.5) == doctest::Approx(0.06).epsilon(1e-15));
  p.mu0 = 0.0;
  CHECK(sample_drift(36, p, 36, 0.75) == doctest::Approx(0.01 * std::log(2.0)).epsilon(1e-12));

  SUBCASE("out-of-range uniforms are rejected") {
    CHECK_THROWS_AS(sample_drift(36, p, 36, 0.0), InvalidArgument);
    CHECK_THROWS_AS(sample_drift(36, p, 36, 1.0), InvalidArgument);
    CHECK_THROWS_AS(sample_drift(36, p, 36, -0.2), InvalidArgument);
    CHECK_THROWS_AS(sample_drift(36, p, 36, std::nan("")), InvalidArgument);
  }
}

TEST_CASE("laplace quantile is symmetric about the location") {
  PDifMPParams p;
  p.mu0 = 0.06;
  p.alpha = 0.01;
  p.b = 0.01;
  for (double s : {30.0, 36.0, 44.0}) {
    const double a = laplace_location(s, p, 36);
    for (double u : {1e-9, 0.01, 0.2, 0.4999, 0.7, 0.93}) {
      const double w = 1 - u;  // w and 1 - w are exact complements
      CHECK(std::abs(sample_drift(s, p, 36, 1 - w) + sample_drift(s, p, 36, w) - 2 * a) < 1e-12);
    }
  }
}

TEST_CASE("laplace moments over a million draws") {
  PDifMPParams p;
  p.mu0 = 0.06;
  p.alpha = 0.0;
  p.b = 0.01;
  PhiloxStream stream(2024, 0, StreamPurpose::Kernel);
  const std::size_t n = 1'000'000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sample_drift(36, p, 36, uniform_open(stream)) - p.mu0;
    sum += x;
    sum_sq += x * x;
  }
  const double b2 = p.b * p.b;
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  // Laplace: variance 2b^2, fourth central moment 24b^4.
  CHECK(std::abs(mean) < 3.0 * std::sqrt(2.0 * b2 / n));
  CHECK(std::abs(var - 2.0 * b2) < 3.0 * std::sqrt(20.0 * b2 * b2 / n));
}

TEST_CASE("discount") {
  CHECK(discount(1, 0.06) == doctest::Approx(0.9417645).epsilon(1e-7));
  CHECK(discount(0, 0.06) == 1.0);
  CHECK(discount(3.7, 0.0) == 1.0);
  CHECK_THROWS_AS(discount(-0.1, 0.06), InvalidArgument);
  for (double t1 : {0.0, 0.02, 0.5}) {
    for (double t2 : {0.1, 0.98}) {
      CHECK(std::abs(discount(t1 + t2, 0.06) - discount(t1, 0.06) * discount(t2, 0.06)) < 1e-12);
    }
  }
}

TEST_CASE("intrinsic payoffs") {
  const OptionSpec put{OptionKind::Put, 40};
  const OptionSpec call{OptionKind::Call, 40};
  CHECK(intrinsic(put, 36) == 4.0);
  CHECK(intrinsic(call, 36) == 0.0);
  CHECK(intrinsic(put, 40) == 0.0);
  for (double s : {12.5, 36.0, 39.99, 40.0, 47.0}) {
    CHECK(intrinsic(put, s) + intrinsic(call, s) == doctest::Approx(std::abs(40 - s)));
    CHECK(intrinsic(put, s) - intrinsic(call, s) == doctest::Approx(40 - s));
  }
}

TEST_CASE("parameter validation") {
  MarketParams m;
  CHECK_NOTHROW(m.validate());
  m.s0 = 0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.sigma = -0.1;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.maturity = 0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);

  PDifMPParams p;
  CHECK_NOTHROW(p.validate());
  p.b = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.lambda0 = -1;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.eta = -0.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.beta = -0.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("simulation grid") {
  CHECK(fine_steps(1.0, 1e-3) == 1000);
  CHECK(fine_steps(1.0, 0.02) == 50);
  CHECK(fine_steps(1.0, 1.0) == 1);
  CHECK_THROWS_AS(fine_steps(1.0, 0.3), ConfigError);
  CHECK_THROWS_AS(fine_steps(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(fine_steps(1.0, 2.0), ConfigError);

  SimConfig cfg;
  CHECK_NOTHROW(cfg.validate(1.0));
  cfg.n_exercise = 30;  // 1000 steps do not split into 30 dates
  CHECK_THROWS_AS(cfg.validate(1.0), ConfigError);
  cfg.n_exercise = 1;
  CHECK_THROWS_AS(cfg.validate(1.0), ConfigError);
  cfg = {};
  cfg.n_paths = 0;
  CHECK_THROWS_AS(cfg.validate(1.0), ConfigError);
}

TEST_CASE("delta resolution") {
  MarketParams m;
  m.s0 = 44;
  m.strike = 40;
  CHECK(resolve_delta({DeltaMode::Strike, 0}, m) == 40.0);
  CHECK(resolve_delta({DeltaMode::Initial, 0}, m) == 44.0);
  CHECK(resolve_delta({DeltaMode::Custom, 37.5}, m) == 37.5);
}

TEST_CASE("option kind names") {
  CHECK(parse_option_kind("put") == OptionKind::Put);
  CHECK(parse_option_kind("call") == OptionKind::Call);
  CHECK(std::string(to_string(OptionKind::Call)) == "call");
  CHECK_THROWS_AS(parse_option_kind("straddle"), InvalidArgument);
}
