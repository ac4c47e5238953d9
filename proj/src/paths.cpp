#include "pdifmp/paths.hpp"

#include <algorithm>
#include <cmath>

#include "path_walk.hpp"

namespace pdifmp {

namespace {

std::vector<double> grid_times(double maturity, std::size_t steps) {
  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    times[k] = detail::grid_time(maturity, k, steps);
  }
  return times;
}

template <class Path>
PathMatrix sample_paths(std::span<const Path> paths, std::size_t n_exercise) {
  if (n_exercise < 1) throw ConfigError("n_exercise must be positive");
  const double maturity = paths.empty() ? 1.0 : paths.front().times.back();
  PathMatrix matrix(paths.size(), n_exercise, maturity);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    matrix.flags[i] = sample_row(paths[i].prices, n_exercise, matrix.row(i)) ? 1 : 0;
  }
  return matrix;
}

}  // namespace

PathMatrix::PathMatrix(std::size_t paths, std::size_t exercise, double maturity)
    : n_paths(paths),
      n_exercise(exercise),
      exercise_times(exercise),
      values(paths * exercise, 0.0),
      flags(paths, 0) {
  for (std::size_t k = 0; k < exercise; ++k) {
    exercise_times[k] = maturity * static_cast<double>(k + 1) / static_cast<double>(exercise);
  }
}

std::size_t PathMatrix::flagged_count() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

InterjumpResult advance_until_jump(const PDifMPState& state, const PDifMPParams& p, double delta,
                                   const MarketParams& m, double h, std::size_t max_steps,
                                   double clock_threshold, PhiloxStream& wiener,
                                   std::normal_distribution<double>& normal,
                                   std::vector<double>& prices) {
  return detail::advance(state, p, delta, m, h, max_steps, clock_threshold, wiener, normal,
                         [&](double s) { prices.push_back(s); });
}

InterjumpResult sample_interjump(const PDifMPState& state, const PDifMPParams& p, double delta,
                                 const MarketParams& m, double h, std::size_t max_steps,
                                 PathStreams& streams, std::normal_distribution<double>& normal,
                                 std::vector<double>& prices) {
  const double threshold = -std::log(uniform_open(streams.clock));
  return advance_until_jump(state, p, delta, m, h, max_steps, threshold, streams.wiener, normal,
                            prices);
}

GbmPath simulate_gbm_path(const MarketParams& m, double drift, const SimConfig& cfg,
                          std::size_t path_index) {
  const std::size_t steps = fine_steps(m.maturity, cfg.h);
  PhiloxStream wiener(cfg.seed, path_index, StreamPurpose::Wiener);
  std::normal_distribution<double> normal;
  const double log_drift = (drift - 0.5 * m.sigma * m.sigma) * cfg.h;
  const double log_vol = m.sigma * std::sqrt(cfg.h);

  GbmPath path;
  path.times = grid_times(m.maturity, steps);
  path.prices.resize(steps + 1);
  path.prices[0] = m.s0;
  for (std::size_t k = 0; k < steps; ++k) {
    path.prices[k + 1] = path.prices[k] * std::exp(log_drift + log_vol * normal(wiener));
  }
  return path;
}

PDifMPPath simulate_pdifmp_path(const MarketParams& m, const PDifMPParams& p,
                                const SimConfig& cfg, std::size_t path_index) {
  const std::size_t steps = fine_steps(m.maturity, cfg.h);

  struct Recorder {
    PDifMPPath& path;
    void step(double s) { path.prices.push_back(s); }
    void jump(std::size_t k, double, double mu) {
      path.jump_times.push_back(path.times[k]);
      path.jump_indices.push_back(k);
      path.drifts.push_back(mu);
    }
  };

  PDifMPPath path;
  path.times = grid_times(m.maturity, steps);
  path.prices.reserve(steps + 1);
  path.prices.push_back(m.s0);
  path.drifts.push_back(p.mu0);
  Recorder recorder{path};
  path.negative_drifts = detail::walk_pdifmp(m, p, cfg, path_index, recorder);
  path.n_jumps = path.jump_times.size();
  path.jump_times.push_back(m.maturity);
  path.jump_indices.push_back(steps);
  return path;
}

bool sample_row(std::span<const double> fine_prices, std::size_t n_exercise,
                std::span<double> out) {
  if (fine_prices.size() < 2 || n_exercise == 0) {
    throw ConfigError("path must contain at least one step");
  }
  const std::size_t steps = fine_prices.size() - 1;
  if (steps % n_exercise != 0) {
    throw ConfigError("exercise date off the fine grid (" + std::to_string(steps) + " steps, " +
                      std::to_string(n_exercise) + " exercise dates)");
  }
  const std::size_t stride = steps / n_exercise;
  for (std::size_t k = 1; k <= n_exercise; ++k) out[k - 1] = fine_prices[k * stride];
  const double peak = *std::max_element(fine_prices.begin(), fine_prices.end());
  return peak > kFlagMultiple * fine_prices.front();
}

PathMatrix sample_on_grid(std::span<const GbmPath> paths, std::size_t n_exercise) {
  return sample_paths(paths, n_exercise);
}

PathMatrix sample_on_grid(std::span<const PDifMPPath> paths, std::size_t n_exercise) {
  return sample_paths(paths, n_exercise);
}

}  // namespace pdifmp
