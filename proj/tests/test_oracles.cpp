#include <cmath>
#include <random>

#include "doctest.h"
#include "pdifmp/lsm.hpp"
#include "pdifmp/oracles.hpp"

using namespace pdifmp;

namespace {

// Reference values frozen from an independent computation (50-digit
// quadrature of the risk-neutral expectation; a separate CRR tree).
// K = 40, r = 0.06, sigma = 0.2, T = 1.
struct Frozen {
  double s0;
  double bs_put;
  double bs_call;
  double crr_put_5000;
};
constexpr Frozen kFrozen[] = {
    {36, 3.844307791596842, 2.173726448226893, 4.486709524797947},
    {38, 2.851932118039478, 3.181350774669529, 3.25717727450631},
    {40, 2.066401004420344, 4.395819661050395, 2.3195163592201413},
    {42, 1.464503941086445, 5.793922597716496, 1.6212531346095065},
    {44, 1.016915226428271, 7.346333883058322, 1.112985048786191},
};
constexpr double kCrrPut36_2000 = 4.486687133110599;
constexpr double kCrrPut36_4000 = 4.486711528287392;
constexpr double kCrrCall44_5000 = 7.346329012549156;

// Accepted gap between tree sizes in the thousands.
constexpr double kCrrTolerance = 1e-4;

MarketParams market(double s0) {
  MarketParams m;
  m.s0 = s0;
  return m;
}

}  // namespace

TEST_CASE("black-scholes against frozen quadrature") {
  for (const Frozen& f : kFrozen) {
    CHECK(std::abs(bs_european(market(f.s0), {OptionKind::Put, 40}).value - f.bs_put) < 1e-8);
    CHECK(std::abs(bs_european(market(f.s0), {OptionKind::Call, 40}).value - f.bs_call) < 1e-8);
  }
}

TEST_CASE("black-scholes limits and parity") {
  MarketParams m = market(36);
  m.sigma = 0;
  CHECK(bs_european(m, {OptionKind::Put, 40}).value == doctest::Approx(1.67058).epsilon(1e-6));
  m.sigma = 1e-9;
  CHECK(bs_european(m, {OptionKind::Put, 40}).value == doctest::Approx(40 * std::exp(-0.06) - 36));

  for (double s0 : {20.0, 36.0, 55.0}) {
    for (double sigma : {0.05, 0.2, 0.9}) {
      for (double r : {0.0, 0.06}) {
        MarketParams p = market(s0);
        p.sigma = sigma;
        p.r = r;
        const double call = bs_european(p, {OptionKind::Call, 40}).value;
        const double put = bs_european(p, {OptionKind::Put, 40}).value;
        CHECK(std::abs(call - put - (s0 - 40 * std::exp(-r))) < 1e-10);
      }
    }
  }
}

TEST_CASE("crr against frozen tree values") {
  for (const Frozen& f : kFrozen) {
    const OraclePrice p = crr_american(market(f.s0), {OptionKind::Put, 40}, 5000);
    CHECK(p.method == OracleMethod::CrrBinomial);
    CHECK(p.steps == 5000);
    CHECK(std::abs(p.value - f.crr_put_5000) < 1e-9);
    CHECK(p.value >= f.bs_put);
  }
  CHECK(std::abs(crr_american(market(36), {OptionKind::Put, 40}, 2000).value - kCrrPut36_2000) < 1e-9);
  CHECK(std::abs(crr_american(market(36), {OptionKind::Put, 40}, 4000).value - kCrrPut36_4000) < 1e-9);
  CHECK(std::abs(kCrrPut36_2000 - kCrrPut36_4000) <= kCrrTolerance);
}

TEST_CASE("american call without dividends is european") {
  const double crr = crr_american(market(44), {OptionKind::Call, 40}, 5000).value;
  CHECK(std::abs(crr - kCrrCall44_5000) < 1e-9);
  CHECK(std::abs(crr - bs_european(market(44), {OptionKind::Call, 40}).value) < 2 * kCrrTolerance);
}

TEST_CASE("crr deterministic limit exercises at once") {
  MarketParams m = market(36);
  m.sigma = 0;
  CHECK(crr_american(m, {OptionKind::Put, 40}, 200).value == 4.0);
  CHECK_THROWS_AS(crr_american(market(36), {OptionKind::Put, 40}, 0), InvalidArgument);
}

TEST_CASE("early exercise premium is non-negative") {
  for (double s0 : {30.0, 40.0, 50.0}) {
    for (double sigma : {0.1, 0.4}) {
      MarketParams m = market(s0);
      m.sigma = sigma;
      const OptionSpec put{OptionKind::Put, 40};
      CHECK(crr_american(m, put, 1000).value >= bs_european(m, put).value - 1e-12);
    }
  }
}

TEST_CASE("fixture dp edge cases") {
  const OptionSpec put{OptionKind::Put, 40};
  PathMatrix single(1, 3, 1.0);
  single.values = {45, 50, 47};
  CHECK(fixture_dp(single, put, 0.06).value == 0.0);

  PathMatrix two_dates(3, 2, 1.0);
  two_dates.values = {30, 35, 50, 38, 41, 39};
  const double expected = std::exp(-0.06) * (5 + 2 + 1) / 3.0;  // two dates: no early decision
  CHECK(fixture_dp(two_dates, put, 0.06).value == doctest::Approx(expected).epsilon(1e-15));
  CHECK(ls_price(two_dates, put, 0.06, 1.0).price == doctest::Approx(expected).epsilon(1e-15));

  CHECK_THROWS_AS(fixture_dp(PathMatrix(17, 3, 1.0), put, 0.06), InvalidArgument);
  CHECK_THROWS_AS(fixture_dp(PathMatrix(4, 5, 1.0), put, 0.06), InvalidArgument);
}

TEST_CASE("fixture dp agrees with ls_price on random matrices") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<std::size_t> rows(1, 16), cols(2, 4);
  std::lognormal_distribution<double> shock(0.0, 0.15);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = rows(gen), e = cols(gen);
    PathMatrix mat(m, e, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 38.0;
      for (std::size_t k = 0; k < e; ++k) mat.at(i, k) = s *= shock(gen);
    }
    const OptionSpec spec{trial % 2 ? OptionKind::Call : OptionKind::Put, 40};
    const double ls = ls_price(mat, spec, 0.06, 1.0).price;
    CHECK(std::abs(ls - fixture_dp(mat, spec, 0.06).value) < 1e-12);
  }
}
