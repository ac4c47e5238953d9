#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdifmp {

/// Raised for arguments outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a simulation grid or preset cannot be realized.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MarketParams {
  double s0 = 36.0;
  double strike = 40.0;
  double r = 0.06;
  double sigma = 0.2;
  double maturity = 1.0;

  void validate() const;
};

/// Reference price from which rate and kernel deviations are measured.
enum class DeltaMode { Strike, Initial, Custom };

struct DeltaSpec {
  DeltaMode mode = DeltaMode::Initial;
  double value = 0.0;  // used only by DeltaMode::Custom
};

/// Jump mechanism: state-dependent rate plus Laplace drift kernel.
struct PDifMPParams {
  double mu0 = 0.06;
  double lambda0 = 0.4;
  double eta = 0.0;
  double beta = 0.0;
  double alpha = 0.01;
  double b = 0.01;
  DeltaSpec delta;

  void validate() const;
};

struct PDifMPState {
  double s;
  double mu;
};

enum class OptionKind { Put, Call };

struct OptionSpec {
  OptionKind kind = OptionKind::Put;
  double strike = 40.0;
};

struct SimConfig {
  double h = 1e-3;
  std::size_t n_paths = 10000;
  std::size_t n_exercise = 50;
  std::uint64_t seed = 42;
  /// Worker cap; 0 means hardware concurrency. Never affects results.
  unsigned threads = 0;

  /// Checks the fine grid and the exercise grid against `maturity`.
  void validate(double maturity) const;
};

/// Number of fine steps T/h. Throws ConfigError unless T/h is integral.
std::size_t fine_steps(double maturity, double h);

/// Concrete delta for one pricing run.
double resolve_delta(const DeltaSpec& spec, const MarketParams& m);

/// lambda0 + eta * max(0, |s - delta| - beta)
double jump_rate(const PDifMPState& state, const PDifMPParams& p, double delta);

/// mu0 + alpha * (s - delta)
double laplace_location(double s, const PDifMPParams& p, double delta);

/// Laplace(a(s), b) quantile at u. Throws InvalidArgument unless 0 < u < 1.
double sample_drift(double s, const PDifMPParams& p, double delta, double u);

/// e^{-rt}; t must be non-negative.
double discount(double t, double r);

double intrinsic(const OptionSpec& spec, double s);

const char* to_string(OptionKind kind);
OptionKind parse_option_kind(const std::string& text);

}  // namespace pdifmp
