#pragma once

#include <cmath>
#include <cstddef>
#include <random>

#include "pdifmp/paths.hpp"

namespace pdifmp::detail {

inline double grid_time(double maturity, std::size_t k, std::size_t steps) {
  return maturity * static_cast<double>(k) / static_cast<double>(steps);
}

// Shared stepping kernel. `on_step(s)` sees every new grid price.
template <class OnStep>
InterjumpResult advance(const PDifMPState& state, const PDifMPParams& p, double delta,
                        const MarketParams& m, double h, std::size_t max_steps,
                        double clock_threshold, PhiloxStream& wiener,
                        std::normal_distribution<double>& normal, OnStep&& on_step) {
  const double log_drift = (state.mu - 0.5 * m.sigma * m.sigma) * h;
  const double log_vol = m.sigma * std::sqrt(h);
  InterjumpResult result;
  double s = state.s;
  while (result.steps < max_steps) {
    result.hazard_before = result.hazard;
    result.hazard += jump_rate({s, state.mu}, p, delta) * h;
    s *= std::exp(log_drift + log_vol * normal(wiener));
    on_step(s);
    ++result.steps;
    if (result.hazard >= clock_threshold) {
      result.jumped = true;
      break;
    }
  }
  result.waiting_time = static_cast<double>(result.steps) * h;
  return result;
}

// One full trajectory without storing it. The walker receives
//   step(s)               for every grid point after t = 0,
//   jump(k, s, mu)        at each regime switch (grid index k, new drift mu).
// Returns the number of negative drift draws.
template <class Walker>
std::size_t walk_pdifmp(const MarketParams& m, const PDifMPParams& p, const SimConfig& cfg,
                        std::size_t path_index, Walker& walker) {
  const std::size_t steps = fine_steps(m.maturity, cfg.h);
  const double delta = resolve_delta(p.delta, m);
  PathStreams streams(cfg.seed, path_index);
  std::normal_distribution<double> normal;

  std::size_t negatives = 0;
  std::size_t k = 0;
  double s = m.s0;
  double mu = p.mu0;
  while (k < steps) {
    const double threshold = -std::log(uniform_open(streams.clock));
    const InterjumpResult seg =
        advance({s, mu}, p, delta, m, cfg.h, steps - k, threshold, streams.wiener, normal,
                [&](double next) {
                  s = next;
                  walker.step(next);
                });
    k += seg.steps;
    // A clock ringing exactly at maturity is not a regime switch.
    if (!seg.jumped || k == steps) break;
    mu = sample_drift(s, p, delta, uniform_open(streams.kernel));
    if (mu < 0.0) ++negatives;
    walker.jump(k, s, mu);
  }
  return negatives;
}

}  // namespace pdifmp::detail
