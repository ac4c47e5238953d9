#pragma once

#include <cstddef>
#include <optional>

#include "pdifmp/lsm.hpp"
#include "pdifmp/model.hpp"
#include "pdifmp/paths.hpp"

namespace pdifmp {

struct PathPayoff {
  double best_value = 0.0;
  std::optional<double> best_time;  // empty when never in the money
  std::size_t n_opportunities = 0;
};

/// Largest e^{-r T_n} * intrinsic(S_{T_n}) over the recorded jump times of
/// the path, maturity included and t = 0 excluded. The maximum looks at the
/// whole path, so this is not a stopping rule.
PathPayoff path_best_discounted_payoff(const PDifMPPath& path, const OptionSpec& spec, double r);

/// Mean of path_best_discounted_payoff over M independent paths.
PricingResult price_pdifmp(const MarketParams& m, const PDifMPParams& p, const OptionSpec& spec,
                           const SimConfig& cfg);

}  // namespace pdifmp
