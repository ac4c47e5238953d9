#include "pdifmp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdifmp/lsm.hpp"

namespace pdifmp {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

OraclePrice bs_european(const MarketParams& m, const OptionSpec& spec) {
  const double k = spec.strike;
  const double df = std::exp(-m.r * m.maturity);
  const double forward_gap = m.s0 - k * df;
  OraclePrice out{0.0, OracleMethod::BsClosedForm, 0};
  if (m.sigma <= 0.0) {
    out.value = spec.kind == OptionKind::Call ? std::max(forward_gap, 0.0)
                                              : std::max(-forward_gap, 0.0);
    return out;
  }
  const double vol = m.sigma * std::sqrt(m.maturity);
  const double d1 = (std::log(m.s0 / k) + (m.r + 0.5 * m.sigma * m.sigma) * m.maturity) / vol;
  const double d2 = d1 - vol;
  if (spec.kind == OptionKind::Call) {
    out.value = m.s0 * norm_cdf(d1) - k * df * norm_cdf(d2);
  } else {
    out.value = k * df * norm_cdf(-d2) - m.s0 * norm_cdf(-d1);
  }
  out.value = std::max(out.value, 0.0);
  return out;
}

OraclePrice crr_american(const MarketParams& m, const OptionSpec& spec, std::size_t steps) {
  if (steps < 1) throw InvalidArgument("crr_american: steps must be >= 1");
  OraclePrice out{0.0, OracleMethod::CrrBinomial, steps};
  const double dt = m.maturity / static_cast<double>(steps);

  if (m.sigma <= 0.0) {
    // Single deterministic path growing at r; exercise at the best node.
    double best = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
      const double t = dt * static_cast<double>(i);
      best = std::max(best, std::exp(-m.r * t) * intrinsic(spec, m.s0 * std::exp(m.r * t)));
    }
    out.value = best;
    return out;
  }

  const double up = std::exp(m.sigma * std::sqrt(dt));
  const double down = 1.0 / up;
  const double growth = std::exp(m.r * dt);
  const double p_up = (growth - down) / (up - down);
  if (!(p_up > 0.0 && p_up < 1.0)) {
    throw InvalidArgument("crr_american: risk-neutral probability outside (0,1); add steps");
  }
  const double step_df = 1.0 / growth;

  // values[j] holds the node with j down-moves.
  std::vector<double> values(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    const double s = m.s0 * std::pow(up, static_cast<double>(steps) - 2.0 * static_cast<double>(j));
    values[j] = intrinsic(spec, s);
  }
  for (std::size_t level = steps; level-- > 0;) {
    for (std::size_t j = 0; j <= level; ++j) {
      const double cont = step_df * (p_up * values[j] + (1.0 - p_up) * values[j + 1]);
      const double s =
          m.s0 * std::pow(up, static_cast<double>(level) - 2.0 * static_cast<double>(j));
      values[j] = std::max(cont, intrinsic(spec, s));
    }
  }
  out.value = values[0];
  return out;
}

OraclePrice fixture_dp(const PathMatrix& paths, const OptionSpec& spec, double r) {
  if (paths.n_paths > 16 || paths.n_exercise > 4) {
    throw InvalidArgument("fixture_dp: fixture limited to M <= 16, M_E <= 4");
  }
  if (paths.n_paths == 0 || paths.n_exercise < 2) throw InvalidArgument("fixture_dp: empty fixture");
  const std::size_t rows = paths.n_paths;
  const std::size_t cols = paths.n_exercise;
  const std::vector<double>& t = paths.exercise_times;

  std::vector<std::vector<double>> cash(rows, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < rows; ++i) cash[i][cols - 1] = intrinsic(spec, paths.at(i, cols - 1));

  // 1-based dates M_E-1 down to 2, i.e. 0-based columns cols-2 .. 1.
  for (std::size_t date = cols - 1; date >= 2; --date) {
    const std::size_t c = date - 1;
    std::vector<std::size_t> itm;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < rows; ++i) {
      const double s = paths.at(i, c);
      if (!(intrinsic(spec, s) > 0.0)) continue;
      double future = 0.0;
      for (std::size_t j = c + 1; j < cols; ++j) future += cash[i][j] * std::exp(-r * (t[j] - t[c]));
      itm.push_back(i);
      xs.push_back(s);
      ys.push_back(future);
    }
    if (itm.empty()) continue;
    const RegressionFit fit = regress_quadratic(xs, ys);
    for (std::size_t j = 0; j < itm.size(); ++j) {
      const double inner = intrinsic(spec, xs[j]);
      if (inner > fit.continuation(xs[j])) {
        cash[itm[j]][c] = inner;
        for (std::size_t later = c + 1; later < cols; ++later) cash[itm[j]][later] = 0.0;
      } else {
        cash[itm[j]][c] = 0.0;
      }
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) total += cash[i][j] * std::exp(-r * t[j]);
  }
  return {total / static_cast<double>(rows), OracleMethod::FixtureDp, 0};
}

}  // namespace pdifmp
