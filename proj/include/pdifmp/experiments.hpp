#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdifmp/lsm.hpp"
#include "pdifmp/model.hpp"

namespace pdifmp {

/// Everything needed for one pricing run. Defaults follow the LS+PDifMP
/// parameter table (T = 1, K = 40, r = mu0 = 0.06, sigma = 0.2, b = 0.01,
/// M = 10000, M_E = 50).
struct ParamSet {
  Method method = Method::LsClassic;
  OptionKind option = OptionKind::Put;
  MarketParams market;
  PDifMPParams jump;
  std::size_t paths = 10000;
  std::size_t exercise_points = 50;
  /// Fine step. Unset: T / M_E for the GBM method, 1e-3 for PDifMP paths.
  std::optional<double> step;
  std::uint64_t seed = 42;
  unsigned threads = 0;

  double effective_step() const;
  SimConfig sim_config() const;
  OptionSpec option_spec() const { return {option, market.strike}; }

  /// Applies one `--key value` style setting. Keys match the CLI flags:
  /// method option s0 strike r sigma maturity mu0 lambda0 eta alpha b beta
  /// delta paths exercise-points step seed threads.
  void set(const std::string& key, const std::string& value);
};

inline constexpr double kDefaultPdifmpStep = 1e-3;

PricingResult price(const ParamSet& params);

/// One CSV line of pricing output.
struct ResultRow {
  std::string method;
  std::string option;
  double s0 = 0.0;
  double strike = 0.0;
  double r = 0.0;
  double sigma = 0.0;
  double lambda0 = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_exercise = 0;
  std::uint64_t seed = 0;
  double price = 0.0;
  double std_error = 0.0;
  double runtime_s = 0.0;
  std::size_t flagged_paths = 0;

  bool operator==(const ResultRow&) const = default;
};

ResultRow make_row(const ParamSet& params, const PricingResult& result, bool record_runtime);

/// Header plus rows; doubles printed with 17 significant digits.
void write_result_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_result_csv(std::istream& in);

enum class PresetKind { Pricing, Paths };

/// A named table or path scenario.
struct Preset {
  std::string id;
  PresetKind kind = PresetKind::Pricing;
  std::string description;
  /// Pricing presets: one entry per (method, parameter) cell.
  /// Path presets: one entry per sub-configuration, labelled in `labels`.
  std::vector<ParamSet> rows;
  std::vector<std::string> labels;
  std::size_t default_path_count = 1;
};

const std::vector<Preset>& presets();
/// Throws ConfigError listing the known ids when `id` is unknown.
const Preset& find_preset(const std::string& id);

struct ExperimentSpec {
  std::string id;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string out_path = "-";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool record_runtime = false;
  /// Path presets only: trajectories per file (unset: preset default) and
  /// grid thinning.
  std::optional<std::size_t> path_count;
  std::size_t stride = 1;
};

/// Preset rows with overrides, seed and thread cap applied.
std::vector<ParamSet> expand(const ExperimentSpec& spec);

/// Prices every cell of a pricing preset and writes the CSV to
/// spec.out_path ("-" for stdout). For a path preset, writes one file per
/// sub-configuration named <stem>_<label>.csv and returns no rows.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

struct BenchRow {
  std::string method;
  std::string option;
  double s0 = 0.0;
  double lambda0 = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  std::size_t trial = 0;
  double runtime_s = 0.0;
  double price = 0.0;
};

struct BenchSummary {
  std::string method;
  double lambda0 = 0.0;
  double s0 = 0.0;
  double mean_s = 0.0;
  double median_s = 0.0;
  double min_s = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> trials;
  std::vector<BenchSummary> summary;  // one per preset row
};

/// Times every cell of a pricing preset `trials` times (trial t uses seed + t).
BenchReport bench(const ExperimentSpec& spec, std::size_t trials);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Long-format path dump: path,t,s,mu,jump,n_jumps. Every `stride`-th grid
/// point is written, plus every jump time and maturity. GBM paths are used
/// when params.method is LsClassic.
void write_paths_csv(std::ostream& out, const ParamSet& params, std::size_t n_paths,
                     std::size_t stride);
void simulate_paths(const ParamSet& params, std::size_t n_paths, std::size_t stride,
                    const std::string& out_path);

std::string format_double(double value);

}  // namespace pdifmp
