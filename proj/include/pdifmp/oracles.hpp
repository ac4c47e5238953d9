#pragma once

#include <cstddef>

#include "pdifmp/model.hpp"
#include "pdifmp/paths.hpp"

namespace pdifmp {

enum class OracleMethod { BsClosedForm, CrrBinomial, FixtureDp };

struct OraclePrice {
  double value = 0.0;
  OracleMethod method = OracleMethod::BsClosedForm;
  std::size_t steps = 0;  // CRR only
};

/// Closed-form Black-Scholes European value; sigma = 0 gives the
/// deterministic limit.
OraclePrice bs_european(const MarketParams& m, const OptionSpec& spec);

/// American value on a recombining Cox-Ross-Rubinstein tree with
/// u = e^{sigma sqrt(dt)}, d = 1/u.
OraclePrice crr_american(const MarketParams& m, const OptionSpec& spec, std::size_t steps);

/// Reference evaluation of the Longstaff-Schwartz policy on a small matrix
/// (M <= 16, M_E <= 4), kept as a dense cash-flow table with explicit
/// zeroing. Used to cross-check ls_price.
OraclePrice fixture_dp(const PathMatrix& paths, const OptionSpec& spec, double r);

}  // namespace pdifmp
