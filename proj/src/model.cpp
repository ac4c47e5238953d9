#include "pdifmp/model.hpp"

#include <cmath>
#include <string>

namespace pdifmp {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace

void MarketParams::validate() const {
  require(std::isfinite(s0) && s0 > 0.0, "s0 must be positive");
  require(std::isfinite(strike) && strike > 0.0, "strike must be positive");
  require(std::isfinite(r) && r >= 0.0, "r must be non-negative");
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be non-negative");
  require(std::isfinite(maturity) && maturity > 0.0, "maturity must be positive");
}

void PDifMPParams::validate() const {
  require(std::isfinite(mu0), "mu0 must be finite");
  require(std::isfinite(lambda0) && lambda0 >= 0.0, "lambda0 must be non-negative");
  require(std::isfinite(eta) && eta >= 0.0, "eta must be non-negative");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be non-negative");
  require(std::isfinite(alpha), "alpha must be finite");
  require(std::isfinite(b) && b > 0.0, "b must be positive");
  if (delta.mode == DeltaMode::Custom) {
    require(std::isfinite(delta.value), "custom delta must be finite");
  }
}

std::size_t fine_steps(double maturity, double h) {
  if (!(h > 0.0) || !(h <= maturity * (1.0 + 1e-12))) {
    throw ConfigError("step size h must satisfy 0 < h <= maturity");
  }
  const double ratio = maturity / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw ConfigError("maturity / h is not an integer (T=" + std::to_string(maturity) +
                      ", h=" + std::to_string(h) + ")");
  }
  return static_cast<std::size_t>(rounded);
}

void SimConfig::validate(double maturity) const {
  if (n_paths < 1) throw ConfigError("n_paths must be at least 1");
  if (n_exercise < 2) throw ConfigError("n_exercise must be at least 2");
  const std::size_t steps = fine_steps(maturity, h);
  if (steps % n_exercise != 0) {
    throw ConfigError("exercise dates do not lie on the fine grid (" + std::to_string(steps) +
                      " steps, " + std::to_string(n_exercise) + " exercise dates)");
  }
}

double resolve_delta(const DeltaSpec& spec, const MarketParams& m) {
  switch (spec.mode) {
    case DeltaMode::Strike:
      return m.strike;
    case DeltaMode::Initial:
      return m.s0;
    case DeltaMode::Custom:
      return spec.value;
  }
  return m.s0;
}

double jump_rate(const PDifMPState& state, const PDifMPParams& p, double delta) {
  const double excess = std::abs(state.s - delta) - p.beta;
  return p.lambda0 + p.eta * (excess > 0.0 ? excess : 0.0);
}

double laplace_location(double s, const PDifMPParams& p, double delta) {
  return p.mu0 + p.alpha * (s - delta);
}

double sample_drift(double s, const PDifMPParams& p, double delta, double u) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("sample_drift: u must lie in (0, 1)");
  const double a = laplace_location(s, p, delta);
  const double centered = u - 0.5;
  if (centered == 0.0) return a;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return a - p.b * sign * std::log1p(-2.0 * std::abs(centered));
}

double discount(double t, double r) {
  if (!(t >= 0.0)) throw InvalidArgument("discount: t must be non-negative");
  return std::exp(-r * t);
}

double intrinsic(const OptionSpec& spec, double s) {
  const double payoff = spec.kind == OptionKind::Put ? spec.strike - s : s - spec.strike;
  return payoff > 0.0 ? payoff : 0.0;
}

const char* to_string(OptionKind kind) { return kind == OptionKind::Put ? "put" : "call"; }

OptionKind parse_option_kind(const std::string& text) {
  if (text == "put") return OptionKind::Put;
  if (text == "call") return OptionKind::Call;
  throw InvalidArgument("option must be 'put' or 'call', got '" + text + "'");
}

}  // namespace pdifmp
