#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "pdifmp/model.hpp"
#include "pdifmp/paths.hpp"

namespace pdifmp {

enum class Method { LsClassic, LsPdifmp, PdifmpDirect };

const char* to_string(Method method);
Method parse_method(const std::string& text);

/// Least-squares fit of y on {1, x, x^2}.
///
/// When fewer than three observations are available or the design is rank
/// deficient the fit is flagged degenerate and its continuation estimate
/// falls back to the plain mean of y.
struct RegressionFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t n_obs = 0;
  bool degenerate = false;

  double continuation(double x) const {
    return degenerate ? c0 : c0 + (c1 + c2 * x) * x;
  }
};

RegressionFit regress_quadratic(std::span<const double> x, std::span<const double> y);

struct PricingResult {
  double price = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  double runtime = 0.0;  // seconds, wall clock
  std::size_t flagged_paths = 0;
  std::uint64_t seed = 0;
  Method method = Method::LsClassic;
  std::size_t negative_drifts = 0;  // Laplace draws below zero, all paths
};

/// Longstaff-Schwartz backward induction over the exercise matrix.
///
/// The backward pass visits exercise columns M_E-1 down to 2 (1-based), so
/// the first exercise date never triggers early exercise. Only in-the-money
/// paths enter the regression, and a path exercises when its intrinsic value
/// strictly exceeds the fitted continuation. The price averages the
/// t=0-discounted cash flows; `std_error` is sd / sqrt(M).
/// `runtime`, `seed` and `method` are left for the caller to fill in.
PricingResult ls_price(const PathMatrix& paths, const OptionSpec& spec, double r, double maturity);

/// Per-path discounted cash flows of the same backward pass (one entry per
/// path, already discounted to t=0), with the exercise column in `column`
/// (-1 if the path never pays).
struct CashFlows {
  std::vector<double> value;
  std::vector<int> column;
};
CashFlows ls_cash_flows(const PathMatrix& paths, const OptionSpec& spec, double r,
                        double maturity);

/// GBM paths with the given drift, sampled at the exercise dates, priced by ls_price.
PricingResult price_ls_classic(const MarketParams& m, const OptionSpec& spec, double drift,
                               const SimConfig& cfg);

/// Piecewise-diffusion paths on the fine grid, sampled at the exercise dates,
/// priced by ls_price.
PricingResult price_ls_pdifmp(const MarketParams& m, const PDifMPParams& p,
                              const OptionSpec& spec, const SimConfig& cfg);

}  // namespace pdifmp
