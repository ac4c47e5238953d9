#include "pdifmp/lsm.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <numeric>

#include "parallel.hpp"

namespace pdifmp {

namespace {

// Pivots below this fraction of the largest one count as rank loss.
constexpr double kRankThreshold = 1e-10;

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments sample_moments(std::span<const double> values) {
  Moments out;
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

template <class Fill>
PricingResult price_on_matrix(const MarketParams& m, const OptionSpec& spec,
                              const SimConfig& cfg, Method method, Fill&& fill_row) {
  const auto start = std::chrono::steady_clock::now();
  PathMatrix matrix(cfg.n_paths, cfg.n_exercise, m.maturity);
  std::vector<std::size_t> negatives(cfg.n_paths, 0);
  detail::parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
    matrix.flags[i] = fill_row(i, matrix.row(i), negatives[i]) ? 1 : 0;
  });
  PricingResult result = ls_price(matrix, spec, m.r, m.maturity);
  result.method = method;
  result.seed = cfg.seed;
  result.negative_drifts = std::accumulate(negatives.begin(), negatives.end(), std::size_t{0});
  result.runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::LsClassic:
      return "ls";
    case Method::LsPdifmp:
      return "ls-pdifmp";
    case Method::PdifmpDirect:
      return "pdifmp";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  if (text == "ls") return Method::LsClassic;
  if (text == "ls-pdifmp") return Method::LsPdifmp;
  if (text == "pdifmp") return Method::PdifmpDirect;
  throw InvalidArgument("method must be one of ls, ls-pdifmp, pdifmp; got '" + text + "'");
}

RegressionFit regress_quadratic(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("regress_quadratic: length mismatch");
  RegressionFit fit;
  fit.n_obs = x.size();
  const auto n = static_cast<Eigen::Index>(x.size());
  const double y_mean =
      x.empty() ? 0.0 : std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  auto fallback = [&] {
    fit.degenerate = true;
    fit.c0 = y_mean;
    fit.c1 = fit.c2 = 0.0;
    return fit;
  };
  if (n < 3) return fallback();

  // Center and scale x so the design columns are O(1).
  const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double spread = 0.0;
  for (double v : x) spread = std::max(spread, std::abs(v - x_mean));
  if (!(spread > 0.0)) return fallback();

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = (x[static_cast<std::size_t>(i)] - x_mean) / spread;
    design(i, 0) = 1.0;
    design(i, 1) = z;
    design(i, 2) = z * z;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < 3) return fallback();
  const Eigen::Vector3d beta = qr.solve(rhs);

  // y = b0 + b1 z + b2 z^2 with z = (x - m) / s.
  const double m = x_mean;
  const double s = spread;
  fit.c2 = beta(2) / (s * s);
  fit.c1 = beta(1) / s - 2.0 * beta(2) * m / (s * s);
  fit.c0 = beta(0) - beta(1) * m / s + beta(2) * m * m / (s * s);
  return fit;
}

CashFlows ls_cash_flows(const PathMatrix& paths, const OptionSpec& spec, double r,
                        double maturity) {
  if (paths.n_paths == 0 || paths.n_exercise == 0) {
    throw InvalidArgument("ls_price: empty path matrix");
  }
  if (paths.n_exercise < 2) throw InvalidArgument("ls_price: need at least two exercise dates");
  const std::size_t n_paths = paths.n_paths;
  const std::size_t n_ex = paths.n_exercise;

  // step_discount^j for j = 0..M_E, composed multiplicatively.
  const double step_discount = discount(maturity / static_cast<double>(n_ex), r);
  std::vector<double> discount_pow(n_ex + 1, 1.0);
  for (std::size_t j = 1; j <= n_ex; ++j) discount_pow[j] = discount_pow[j - 1] * step_discount;

  CashFlows cf;
  cf.value.assign(n_paths, 0.0);
  cf.column.assign(n_paths, -1);
  for (std::size_t i = 0; i < n_paths; ++i) {
    const double payoff = intrinsic(spec, paths.at(i, n_ex - 1));
    if (payoff > 0.0) {
      cf.value[i] = payoff;
      cf.column[i] = static_cast<int>(n_ex - 1);
    }
  }

  std::vector<std::size_t> itm;
  std::vector<double> x;
  std::vector<double> y;
  itm.reserve(n_paths);
  x.reserve(n_paths);
  y.reserve(n_paths);
  for (std::size_t col = n_ex - 2; col >= 1; --col) {
    itm.clear();
    x.clear();
    y.clear();
    for (std::size_t i = 0; i < n_paths; ++i) {
      const double s = paths.at(i, col);
      if (intrinsic(spec, s) <= 0.0) continue;
      itm.push_back(i);
      x.push_back(s);
      y.push_back(cf.column[i] < 0
                      ? 0.0
                      : cf.value[i] * discount_pow[static_cast<std::size_t>(cf.column[i]) - col]);
    }
    if (!itm.empty()) {
      const RegressionFit fit = regress_quadratic(x, y);
      for (std::size_t j = 0; j < itm.size(); ++j) {
        const double exercise_value = intrinsic(spec, x[j]);
        if (exercise_value > fit.continuation(x[j])) {
          cf.value[itm[j]] = exercise_value;
          cf.column[itm[j]] = static_cast<int>(col);
        }
      }
    }
  }

  for (std::size_t i = 0; i < n_paths; ++i) {
    if (cf.column[i] >= 0) cf.value[i] *= discount_pow[static_cast<std::size_t>(cf.column[i]) + 1];
  }
  return cf;
}

PricingResult ls_price(const PathMatrix& paths, const OptionSpec& spec, double r,
                       double maturity) {
  const CashFlows cf = ls_cash_flows(paths, spec, r, maturity);
  const Moments mom = sample_moments(cf.value);
  PricingResult result;
  result.price = mom.mean;
  result.std_error = mom.std_error;
  result.n_paths = paths.n_paths;
  result.flagged_paths = paths.flagged_count();
  return result;
}

PricingResult price_ls_classic(const MarketParams& m, const OptionSpec& spec, double drift,
                               const SimConfig& cfg) {
  m.validate();
  cfg.validate(m.maturity);
  return price_on_matrix(m, spec, cfg, Method::LsClassic,
                         [&](std::size_t i, std::span<double> row, std::size_t&) {
                           const GbmPath path = simulate_gbm_path(m, drift, cfg, i);
                           return sample_row(path.prices, cfg.n_exercise, row);
                         });
}

PricingResult price_ls_pdifmp(const MarketParams& m, const PDifMPParams& p,
                              const OptionSpec& spec, const SimConfig& cfg) {
  m.validate();
  p.validate();
  cfg.validate(m.maturity);
  return price_on_matrix(m, spec, cfg, Method::LsPdifmp,
                         [&](std::size_t i, std::span<double> row, std::size_t& negatives) {
                           const PDifMPPath path = simulate_pdifmp_path(m, p, cfg, i);
                           negatives = path.negative_drifts;
                           return sample_row(path.prices, cfg.n_exercise, row);
                         });
}

}  // namespace pdifmp
