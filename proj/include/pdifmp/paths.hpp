#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdifmp/model.hpp"
#include "pdifmp/rng.hpp"

namespace pdifmp {

/// Paths whose running maximum exceeds this multiple of s0 are flagged.
inline constexpr double kFlagMultiple = 3.0;

struct GbmPath {
  std::vector<double> times;
  std::vector<double> prices;
};

/// One piecewise-diffusion trajectory on the fine grid.
///
/// `jump_times` lists the regime switches T_1 < T_2 < ... (all < T) followed
/// by the maturity T itself; `jump_indices` gives the matching fine-grid
/// positions. `drifts[0]` is mu0 and `drifts[i]` is the regime started at
/// `jump_times[i-1]`.
struct PDifMPPath {
  std::vector<double> times;
  std::vector<double> prices;
  std::vector<double> jump_times;
  std::vector<std::size_t> jump_indices;
  std::vector<double> drifts;
  std::size_t n_jumps = 0;
  std::size_t negative_drifts = 0;
};

/// M paths sampled at the exercise dates t_k = k T / M_E, k = 1..M_E.
struct PathMatrix {
  std::size_t n_paths = 0;
  std::size_t n_exercise = 0;
  std::vector<double> exercise_times;
  std::vector<double> values;  // row-major, n_paths x n_exercise
  std::vector<std::uint8_t> flags;

  PathMatrix() = default;
  PathMatrix(std::size_t paths, std::size_t exercise, double maturity);

  double& at(std::size_t path, std::size_t k) { return values[path * n_exercise + k]; }
  double at(std::size_t path, std::size_t k) const { return values[path * n_exercise + k]; }
  std::span<double> row(std::size_t path) { return {values.data() + path * n_exercise, n_exercise}; }
  std::span<const double> row(std::size_t path) const {
    return {values.data() + path * n_exercise, n_exercise};
  }
  std::size_t flagged_count() const;
};

/// Independent substreams for one path.
struct PathStreams {
  PhiloxStream wiener;
  PhiloxStream clock;
  PhiloxStream kernel;

  PathStreams(std::uint64_t seed, std::uint64_t path_index)
      : wiener(seed, path_index, StreamPurpose::Wiener),
        clock(seed, path_index, StreamPurpose::JumpClock),
        kernel(seed, path_index, StreamPurpose::Kernel) {}
};

/// Outcome of integrating one regime until the exponential clock rings.
struct InterjumpResult {
  std::size_t steps = 0;        // grid steps advanced
  double waiting_time = 0.0;    // steps * h
  bool jumped = false;          // false: horizon reached first
  double hazard = 0.0;          // accumulated rate integral at the last step
  double hazard_before = 0.0;   // integral one grid step earlier
};

/// Advances the price with frozen drift `state.mu`, accumulating the
/// left-point integral of the jump rate, until it reaches `clock_threshold`
/// (= -ln U) or `max_steps` elapse. New prices are appended to `prices`.
InterjumpResult advance_until_jump(const PDifMPState& state, const PDifMPParams& p, double delta,
                                   const MarketParams& m, double h, std::size_t max_steps,
                                   double clock_threshold, PhiloxStream& wiener,
                                   std::normal_distribution<double>& normal,
                                   std::vector<double>& prices);

/// Draws U from the clock stream and calls advance_until_jump.
InterjumpResult sample_interjump(const PDifMPState& state, const PDifMPParams& p, double delta,
                                 const MarketParams& m, double h, std::size_t max_steps,
                                 PathStreams& streams, std::normal_distribution<double>& normal,
                                 std::vector<double>& prices);

GbmPath simulate_gbm_path(const MarketParams& m, double drift, const SimConfig& cfg,
                          std::size_t path_index);

PDifMPPath simulate_pdifmp_path(const MarketParams& m, const PDifMPParams& p,
                                const SimConfig& cfg, std::size_t path_index);

/// Copies prices at every (fine_steps / n_exercise)-th grid point into `out`
/// and returns whether the path's running maximum exceeded kFlagMultiple*s0.
bool sample_row(std::span<const double> fine_prices, std::size_t n_exercise,
                std::span<double> out);

PathMatrix sample_on_grid(std::span<const GbmPath> paths, std::size_t n_exercise);
PathMatrix sample_on_grid(std::span<const PDifMPPath> paths, std::size_t n_exercise);

}  // namespace pdifmp
