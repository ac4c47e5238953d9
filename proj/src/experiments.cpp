#include "pdifmp/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "parallel.hpp"
#include "pdifmp/direct.hpp"
#include "pdifmp/paths.hpp"

namespace pdifmp {

namespace {

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw InvalidArgument("--" + key + ": expected a number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("--" + key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

DeltaSpec parse_delta(const std::string& text) {
  if (text == "strike") return {DeltaMode::Strike, 0.0};
  if (text == "initial") return {DeltaMode::Initial, 0.0};
  return {DeltaMode::Custom, parse_double("delta", text)};
}

// Builders for the preset tables. `base` carries the table-wide settings.
ParamSet with(ParamSet base, Method method, double s0, double lambda0) {
  base.method = method;
  base.market.s0 = s0;
  base.jump.lambda0 = lambda0;
  return base;
}

const std::vector<double> kPutSpots{36, 38, 40, 42, 44};

ParamSet table_base(double alpha, double eta) {
  ParamSet p;
  p.jump.alpha = alpha;
  p.jump.eta = eta;
  p.jump.beta = 0.0;
  p.jump.delta = {DeltaMode::Initial, 0.0};
  return p;
}

void add_cells(Preset& preset, const ParamSet& base, const std::vector<Method>& methods,
               const std::vector<double>& spots, const std::vector<double>& lambdas) {
  for (double s0 : spots) {
    for (double lambda0 : lambdas) {
      for (Method m : methods) preset.rows.push_back(with(base, m, s0, lambda0));
    }
  }
}

const std::vector<Method> kAllMethods{Method::LsClassic, Method::LsPdifmp, Method::PdifmpDirect};
const std::vector<Method> kLsMethods{Method::LsClassic, Method::LsPdifmp};

Preset make_preset(std::string id, PresetKind kind, std::string description) {
  Preset p;
  p.id = std::move(id);
  p.kind = kind;
  p.description = std::move(description);
  return p;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  {
    Preset p = make_preset("table4", PresetKind::Pricing,
             "Put, LS vs LS+PDifMP, delta = K or s0 (alpha=1e-6, lambda0=5, eta=0.5)");
    const ParamSet base = table_base(1e-6, 0.5);
    const std::vector<std::pair<double, DeltaMode>> cells{
        {36, DeltaMode::Strike}, {36, DeltaMode::Initial}, {38, DeltaMode::Strike},
        {38, DeltaMode::Initial}, {40, DeltaMode::Initial}, {42, DeltaMode::Strike},
        {42, DeltaMode::Initial}, {44, DeltaMode::Strike}, {44, DeltaMode::Initial}};
    for (const auto& [s0, mode] : cells) {
      for (Method m : kLsMethods) {
        ParamSet row = with(base, m, s0, 5.0);
        row.jump.delta = {mode, 0.0};
        p.rows.push_back(row);
      }
    }
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table5", PresetKind::Pricing, "Put, three methods, eta=0, alpha=0.01");
    add_cells(p, table_base(0.01, 0.0), kAllMethods, kPutSpots, {0.4, 0.6, 0.8});
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table6", PresetKind::Pricing, "Put, three methods, eta=0, alpha=-0.01");
    add_cells(p, table_base(-0.01, 0.0), kAllMethods, kPutSpots, {0.4, 0.6, 0.8});
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table7", PresetKind::Pricing,
             "Put, three methods, lambda0=0.4, eta=0.005, alpha in {0.01,-0.01}");
    for (double s0 : kPutSpots) {
      for (double alpha : {0.01, -0.01}) {
        for (Method m : kAllMethods) p.rows.push_back(with(table_base(alpha, 0.005), m, s0, 0.4));
      }
    }
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table8", PresetKind::Pricing, "Put, LS vs LS+PDifMP, alpha=0.01, low lambda0/eta");
    for (double s0 : kPutSpots) {
      for (auto [lambda0, eta] : std::vector<std::pair<double, double>>{{0.5, 0.0}, {1.0, 0.0}, {0.5, 0.01}}) {
        for (Method m : kLsMethods) p.rows.push_back(with(table_base(0.01, eta), m, s0, lambda0));
      }
    }
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table9", PresetKind::Pricing,
             "Put, LS vs LS+PDifMP, alpha=1e-6, high lambda0/eta, delta=s0");
    for (double s0 : kPutSpots) {
      for (auto [lambda0, eta] :
           std::vector<std::pair<double, double>>{{5.0, 0.0}, {5.0, 0.3}, {5.0, 0.5}, {10.0, 0.6}}) {
        for (Method m : kLsMethods) p.rows.push_back(with(table_base(1e-6, eta), m, s0, lambda0));
      }
    }
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table10", PresetKind::Pricing, "Put, three methods, eta=0, alpha=0");
    add_cells(p, table_base(0.0, 0.0), kAllMethods, kPutSpots, {0.4, 0.6, 0.8});
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table11", PresetKind::Pricing,
             "Put, three methods, eta=0, alpha=0.01, spots 32/34/46/48");
    const ParamSet base = table_base(0.01, 0.0);
    add_cells(p, base, kAllMethods, {32, 34}, {0.4, 0.6, 0.8, 1.0, 1.2});
    add_cells(p, base, kAllMethods, {46, 48}, {0.4, 0.6, 0.8});
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table12", PresetKind::Pricing, "Put, three methods, lambda0=0.4, alpha=0.01, eta sweep");
    for (double s0 : kPutSpots) {
      for (double eta : {0.001, 0.005, 0.01}) {
        for (Method m : kAllMethods) p.rows.push_back(with(table_base(0.01, eta), m, s0, 0.4));
      }
    }
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table13", PresetKind::Pricing, "Call, three methods, eta=0, alpha=0.01");
    ParamSet base = table_base(0.01, 0.0);
    base.option = OptionKind::Call;
    add_cells(p, base, kAllMethods, kPutSpots, {0.01, 0.1, 0.2});
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table14", PresetKind::Pricing, "Runtime, put, s0=36, eta=0, alpha=0.01");
    add_cells(p, table_base(0.01, 0.0), kAllMethods, {36}, {0.4, 0.6, 0.8});
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table15", PresetKind::Pricing, "Runtime, call, s0=36, eta=0, alpha=0.01, low lambda0");
    ParamSet base = table_base(0.01, 0.0);
    base.option = OptionKind::Call;
    add_cells(p, base, kAllMethods, {36}, {0.01, 0.1, 0.2});
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("table16", PresetKind::Pricing, "Runtime, call, s0=36, LS vs PDifMP, lambda0 0.6-1.2");
    ParamSet base = table_base(0.01, 0.0);
    base.option = OptionKind::Call;
    add_cells(p, base, {Method::LsClassic, Method::PdifmpDirect}, {36}, {0.6, 0.8, 1.0, 1.2});
    out.push_back(std::move(p));
  }

  // Path scenarios: alpha = 1e-6, b = 0.01, beta = 0, delta = s0, T = 1.
  auto scenario = [](std::string id, std::string description, double s0,
                     std::vector<std::pair<double, double>> lambda_eta, std::size_t n) {
    Preset p = make_preset(std::move(id), PresetKind::Paths, std::move(description));
    p.default_path_count = n;
    char label = 'a';
    for (auto [lambda0, eta] : lambda_eta) {
      ParamSet row = table_base(1e-6, eta);
      row.method = Method::PdifmpDirect;
      row.market.s0 = s0;
      row.jump.lambda0 = lambda0;
      p.rows.push_back(row);
      p.labels.emplace_back(1, label++);
    }
    return p;
  };
  out.push_back(scenario("scenarioA", "Paths, lambda0=5, eta in {0,0.3,0.5,1}", 36,
                         {{5, 0}, {5, 0.3}, {5, 0.5}, {5, 1}}, 1));
  out.push_back(scenario("scenarioB", "Paths, eta=1, lambda0 in {5,1,0.1,0.01}", 36,
                         {{5, 1}, {1, 1}, {0.1, 1}, {0.01, 1}}, 1));
  out.push_back(scenario("scenarioC", "Paths, (lambda0, eta) in {(20,0),(50,0.3)}", 36,
                         {{20, 0}, {50, 0.3}}, 1));
  out.push_back(scenario("scenarioD", "Paths from s0=36, shared Wiener draws", 36,
                         {{10, 0}, {10, 0.5}, {1, 0.5}, {1, 1}}, 5));
  out.push_back(scenario("scenarioE", "Paths from s0=44, shared Wiener draws", 44,
                         {{10, 0}, {10, 0.5}, {1, 0.5}, {1, 1}}, 5));
  {
    Preset p = make_preset("gbm-compare", PresetKind::Paths, "Constant-drift GBM paths from s0=36");
    p.default_path_count = 5;
    ParamSet row;
    row.method = Method::LsClassic;
    row.step = kDefaultPdifmpStep;
    p.rows.push_back(row);
    p.labels.emplace_back("a");
    out.push_back(std::move(p));
  }
  {
    Preset p = make_preset("pricing-regime", PresetKind::Paths, "Paths, lambda0=0.6, eta=0, alpha=0.01");
    p.default_path_count = 5;
    ParamSet row = table_base(0.01, 0.0);
    row.method = Method::PdifmpDirect;
    row.jump.lambda0 = 0.6;
    p.rows.push_back(row);
    p.labels.emplace_back("a");
    out.push_back(std::move(p));
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  return file;
}

template <class Writer>
void emit(const std::string& out_path, Writer&& writer) {
  if (out_path.empty() || out_path == "-") {
    writer(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file = open_output(out_path);
  writer(file);
  file.flush();
  if (!file) throw IoError("write to '" + out_path + "' failed");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

constexpr const char* kResultHeader =
    "method,option,s0,K,r,sigma,lambda0,eta,alpha,b,beta,delta,n_paths,n_exercise,seed,price,"
    "std_error,runtime_s,flagged_paths";

}  // namespace

double ParamSet::effective_step() const {
  if (step) return *step;
  if (method == Method::LsClassic) {
    return market.maturity / static_cast<double>(std::max<std::size_t>(exercise_points, 1));
  }
  return kDefaultPdifmpStep;
}

SimConfig ParamSet::sim_config() const {
  SimConfig cfg;
  cfg.h = effective_step();
  cfg.n_paths = paths;
  cfg.n_exercise = exercise_points;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

void ParamSet::set(const std::string& key, const std::string& value) {
  if (key == "method") {
    method = parse_method(value);
  } else if (key == "option") {
    option = parse_option_kind(value);
  } else if (key == "s0") {
    market.s0 = parse_double(key, value);
  } else if (key == "strike") {
    market.strike = parse_double(key, value);
  } else if (key == "r") {
    market.r = parse_double(key, value);
  } else if (key == "sigma") {
    market.sigma = parse_double(key, value);
  } else if (key == "maturity") {
    market.maturity = parse_double(key, value);
  } else if (key == "mu0") {
    jump.mu0 = parse_double(key, value);
  } else if (key == "lambda0") {
    jump.lambda0 = parse_double(key, value);
  } else if (key == "eta") {
    jump.eta = parse_double(key, value);
  } else if (key == "alpha") {
    jump.alpha = parse_double(key, value);
  } else if (key == "b") {
    jump.b = parse_double(key, value);
  } else if (key == "beta") {
    jump.beta = parse_double(key, value);
  } else if (key == "delta") {
    jump.delta = parse_delta(value);
  } else if (key == "paths") {
    paths = parse_count(key, value);
  } else if (key == "exercise-points") {
    exercise_points = parse_count(key, value);
  } else if (key == "step") {
    step = parse_double(key, value);
  } else if (key == "seed") {
    seed = parse_count(key, value);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(parse_count(key, value));
  } else {
    throw InvalidArgument("unknown parameter '" + key + "'");
  }
}

PricingResult price(const ParamSet& params) {
  const SimConfig cfg = params.sim_config();
  const OptionSpec spec = params.option_spec();
  switch (params.method) {
    case Method::LsClassic:
      return price_ls_classic(params.market, spec, params.jump.mu0, cfg);
    case Method::LsPdifmp:
      return price_ls_pdifmp(params.market, params.jump, spec, cfg);
    case Method::PdifmpDirect:
      return price_pdifmp(params.market, params.jump, spec, cfg);
  }
  throw InvalidArgument("unknown method");
}

ResultRow make_row(const ParamSet& params, const PricingResult& result, bool record_runtime) {
  ResultRow row;
  row.method = to_string(params.method);
  row.option = to_string(params.option);
  row.s0 = params.market.s0;
  row.strike = params.market.strike;
  row.r = params.market.r;
  row.sigma = params.market.sigma;
  row.lambda0 = params.jump.lambda0;
  row.eta = params.jump.eta;
  row.alpha = params.jump.alpha;
  row.b = params.jump.b;
  row.beta = params.jump.beta;
  row.delta = resolve_delta(params.jump.delta, params.market);
  row.n_paths = result.n_paths;
  row.n_exercise = params.exercise_points;
  row.seed = result.seed;
  row.price = result.price;
  row.std_error = result.std_error;
  row.runtime_s = record_runtime ? result.runtime : 0.0;
  row.flagged_paths = result.flagged_paths;
  return row;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_result_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultHeader << '\n';
  for (const ResultRow& row : rows) {
    out << row.method << ',' << row.option << ',' << format_double(row.s0) << ','
        << format_double(row.strike) << ',' << format_double(row.r) << ','
        << format_double(row.sigma) << ',' << format_double(row.lambda0) << ','
        << format_double(row.eta) << ',' << format_double(row.alpha) << ','
        << format_double(row.b) << ',' << format_double(row.beta) << ','
        << format_double(row.delta) << ',' << row.n_paths << ',' << row.n_exercise << ','
        << row.seed << ',' << format_double(row.price) << ',' << format_double(row.std_error)
        << ',' << format_double(row.runtime_s) << ',' << row.flagged_paths << '\n';
  }
}

std::vector<ResultRow> read_result_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultHeader) {
    throw IoError("result CSV: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 19) throw IoError("result CSV: expected 19 fields, got " + std::to_string(f.size()));
    ResultRow row;
    row.method = f[0];
    row.option = f[1];
    row.s0 = parse_double("s0", f[2]);
    row.strike = parse_double("K", f[3]);
    row.r = parse_double("r", f[4]);
    row.sigma = parse_double("sigma", f[5]);
    row.lambda0 = parse_double("lambda0", f[6]);
    row.eta = parse_double("eta", f[7]);
    row.alpha = parse_double("alpha", f[8]);
    row.b = parse_double("b", f[9]);
    row.beta = parse_double("beta", f[10]);
    row.delta = parse_double("delta", f[11]);
    row.n_paths = parse_count("n_paths", f[12]);
    row.n_exercise = parse_count("n_exercise", f[13]);
    row.seed = parse_count("seed", f[14]);
    row.price = parse_double("price", f[15]);
    row.std_error = parse_double("std_error", f[16]);
    row.runtime_s = parse_double("runtime_s", f[17]);
    row.flagged_paths = parse_count("flagged_paths", f[18]);
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(const std::string& id) {
  for (const Preset& p : presets()) {
    if (p.id == id) return p;
  }
  std::string known;
  for (const Preset& p : presets()) known += (known.empty() ? "" : ", ") + p.id;
  throw ConfigError("unknown preset '" + id + "'; known presets: " + known);
}

std::vector<ParamSet> expand(const ExperimentSpec& spec) {
  const Preset& preset = find_preset(spec.id);
  std::vector<ParamSet> rows = preset.rows;
  for (ParamSet& row : rows) {
    for (const auto& [key, value] : spec.overrides) {
      if (key == "method" && preset.kind == PresetKind::Pricing) {
        throw InvalidArgument("method is fixed by pricing preset '" + spec.id + "'");
      }
      row.set(key, value);
    }
    if (spec.seed) row.seed = *spec.seed;
    row.threads = spec.threads;
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  const Preset& preset = find_preset(spec.id);
  const std::vector<ParamSet> rows = expand(spec);

  if (preset.kind == PresetKind::Paths) {
    if (spec.out_path.empty() || spec.out_path == "-") {
      throw InvalidArgument("path preset '" + spec.id + "' writes several files; give an output stem");
    }
    std::string stem = spec.out_path;
    if (stem.size() > 4 && stem.ends_with(".csv")) stem.resize(stem.size() - 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      simulate_paths(rows[i], spec.path_count.value_or(preset.default_path_count), spec.stride,
                     stem + "_" + preset.labels[i] + ".csv");
    }
    return {};
  }

  // Open the destination before the (long) pricing runs so I/O errors surface first.
  std::ofstream file;
  const bool to_stdout = spec.out_path.empty() || spec.out_path == "-";
  if (!to_stdout) file = open_output(spec.out_path);

  std::vector<ResultRow> out;
  out.reserve(rows.size());
  for (const ParamSet& row : rows) out.push_back(make_row(row, price(row), spec.record_runtime));

  std::ostream& sink = to_stdout ? std::cout : file;
  write_result_csv(sink, out);
  sink.flush();
  if (!sink) throw IoError("write to '" + spec.out_path + "' failed");
  return out;
}

BenchReport bench(const ExperimentSpec& spec, std::size_t trials) {
  if (trials < 1) throw InvalidArgument("bench: trials must be >= 1");
  const Preset& preset = find_preset(spec.id);
  if (preset.kind != PresetKind::Pricing) {
    throw InvalidArgument("bench needs a pricing preset, '" + spec.id + "' is a path preset");
  }
  const std::vector<ParamSet> rows = expand(spec);
  BenchReport report;
  for (const ParamSet& base : rows) {
    std::vector<double> times;
    for (std::size_t t = 0; t < trials; ++t) {
      ParamSet row = base;
      row.seed = base.seed + t;
      const PricingResult result = price(row);
      times.push_back(result.runtime);
      report.trials.push_back({to_string(row.method), to_string(row.option), row.market.s0,
                               row.jump.lambda0, row.jump.eta, row.jump.alpha, t, result.runtime,
                               result.price});
    }
    BenchSummary summary{to_string(base.method), base.jump.lambda0, base.market.s0};
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    summary.min_s = sorted.front();
    summary.median_s = sorted.size() % 2 == 1
                           ? sorted[sorted.size() / 2]
                           : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    double total = 0.0;
    for (double v : times) total += v;
    summary.mean_s = total / static_cast<double>(times.size());
    report.summary.push_back(summary);
  }
  emit(spec.out_path, [&](std::ostream& out) { write_bench_csv(out, report.trials); });
  return report;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "method,option,s0,lambda0,eta,alpha,trial,runtime_s,price\n";
  for (const BenchRow& row : rows) {
    out << row.method << ',' << row.option << ',' << format_double(row.s0) << ','
        << format_double(row.lambda0) << ',' << format_double(row.eta) << ','
        << format_double(row.alpha) << ',' << row.trial << ',' << format_double(row.runtime_s)
        << ',' << format_double(row.price) << '\n';
  }
}

void write_paths_csv(std::ostream& out, const ParamSet& params, std::size_t n_paths,
                     std::size_t stride) {
  if (stride < 1) throw InvalidArgument("stride must be >= 1");
  params.market.validate();
  params.jump.validate();
  SimConfig cfg = params.sim_config();
  cfg.n_paths = std::max<std::size_t>(n_paths, 1);
  fine_steps(params.market.maturity, cfg.h);

  out << "path,t,s,mu,jump,n_jumps\n";
  constexpr std::size_t kBatch = 256;
  std::vector<PDifMPPath> batch;
  for (std::size_t first = 0; first < n_paths; first += kBatch) {
    const std::size_t count = std::min(kBatch, n_paths - first);
    batch.assign(count, PDifMPPath{});
    detail::parallel_for(count, cfg.threads, [&](std::size_t j) {
      if (params.method == Method::LsClassic) {
        GbmPath gbm = simulate_gbm_path(params.market, params.jump.mu0, cfg, first + j);
        PDifMPPath& path = batch[j];
        path.times = std::move(gbm.times);
        path.prices = std::move(gbm.prices);
        path.drifts = {params.jump.mu0};
        path.jump_times = {path.times.back()};
        path.jump_indices = {path.prices.size() - 1};
      } else {
        batch[j] = simulate_pdifmp_path(params.market, params.jump, cfg, first + j);
      }
    });
    for (std::size_t j = 0; j < count; ++j) {
      const PDifMPPath& path = batch[j];
      const std::size_t last = path.prices.size() - 1;
      std::size_t regime = 0;  // index into drifts for the current grid point
      std::size_t next_jump = 0;
      for (std::size_t k = 0; k <= last; ++k) {
        bool is_jump = false;
        if (next_jump < path.n_jumps && path.jump_indices[next_jump] == k) {
          is_jump = true;
          ++regime;
          ++next_jump;
        }
        if (k % stride != 0 && k != last && !is_jump) continue;
        out << (first + j) << ',' << format_double(path.times[k]) << ','
            << format_double(path.prices[k]) << ',' << format_double(path.drifts[regime]) << ','
            << (is_jump ? 1 : 0) << ',' << path.n_jumps << '\n';
      }
    }
  }
}

void simulate_paths(const ParamSet& params, std::size_t n_paths, std::size_t stride,
                    const std::string& out_path) {
  emit(out_path, [&](std::ostream& out) { write_paths_csv(out, params, n_paths, stride); });
}

}  // namespace pdifmp
