#include "pdifmp/direct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "path_walk.hpp"

namespace pdifmp {

PathPayoff path_best_discounted_payoff(const PDifMPPath& path, const OptionSpec& spec, double r) {
  PathPayoff out;
  out.n_opportunities = path.jump_times.size();
  for (std::size_t n = 0; n < path.jump_times.size(); ++n) {
    const double t = path.jump_times[n];
    const double value = discount(t, r) * intrinsic(spec, path.prices[path.jump_indices[n]]);
    if (value > out.best_value) {
      out.best_value = value;
      out.best_time = t;
    }
  }
  return out;
}

PricingResult price_pdifmp(const MarketParams& m, const PDifMPParams& p, const OptionSpec& spec,
                           const SimConfig& cfg) {
  m.validate();
  p.validate();
  if (cfg.n_paths < 1) throw ConfigError("n_paths must be at least 1");
  fine_steps(m.maturity, cfg.h);

  const auto start = std::chrono::steady_clock::now();
  std::vector<double> values(cfg.n_paths, 0.0);
  std::vector<std::uint8_t> flags(cfg.n_paths, 0);
  std::vector<std::size_t> negatives(cfg.n_paths, 0);
  const std::size_t steps = fine_steps(m.maturity, cfg.h);

  // Only the jump-time prices and the running maximum matter here, so the
  // path is walked without being stored. Same draws and arithmetic as
  // simulate_pdifmp_path followed by path_best_discounted_payoff.
  struct BestPayoff {
    const OptionSpec& spec;
    double r;
    double maturity;
    std::size_t steps;
    double last;
    double peak;
    double best = 0.0;
    void step(double s) {
      last = s;
      peak = std::max(peak, s);
    }
    void jump(std::size_t k, double s, double) {
      offer(detail::grid_time(maturity, k, steps), s);
    }
    void offer(double t, double s) {
      const double value = discount(t, r) * intrinsic(spec, s);
      if (value > best) best = value;
    }
  };

  detail::parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
    BestPayoff walker{spec, m.r, m.maturity, steps, m.s0, m.s0};
    negatives[i] = detail::walk_pdifmp(m, p, cfg, i, walker);
    walker.offer(m.maturity, walker.last);
    values[i] = walker.best;
    flags[i] = walker.peak > kFlagMultiple * m.s0 ? 1 : 0;
  });

  const auto n = static_cast<double>(cfg.n_paths);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);

  PricingResult result;
  result.price = mean;
  result.std_error = cfg.n_paths > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  result.n_paths = cfg.n_paths;
  result.flagged_paths = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
  result.seed = cfg.seed;
  result.method = Method::PdifmpDirect;
  result.negative_drifts = std::accumulate(negatives.begin(), negatives.end(), std::size_t{0});
  result.runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace pdifmp
