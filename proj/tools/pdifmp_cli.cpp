// Command-line front end. Talks to the library only through pdifmp.h.
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdifmp/pdifmp.h"

namespace {

struct Failure {
  int code;
};

void check(pdifmp_status status) {
  if (status != PDIFMP_OK) {
    std::fprintf(stderr, "pdifmp: %s: %s\n", pdifmp_status_name(status), pdifmp_last_error());
    throw Failure{static_cast<int>(status) + 1};
  }
}

struct ParamsDeleter {
  void operator()(pdifmp_params* p) const { pdifmp_params_destroy(p); }
};
struct ExperimentDeleter {
  void operator()(pdifmp_experiment* e) const { pdifmp_experiment_destroy(e); }
};
using ParamsHandle = std::unique_ptr<pdifmp_params, ParamsDeleter>;
using ExperimentHandle = std::unique_ptr<pdifmp_experiment, ExperimentDeleter>;

// Model flags shared by every subcommand; only flags actually given are forwarded.
const std::vector<std::pair<std::string, std::string>> kModelFlags = {
    {"option", "put or call"},
    {"s0", "initial asset price"},
    {"strike", "strike price K"},
    {"r", "risk-free rate"},
    {"sigma", "volatility"},
    {"maturity", "maturity T in years"},
    {"mu0", "initial (or constant GBM) drift"},
    {"lambda0", "baseline jump rate"},
    {"eta", "jump-rate sensitivity"},
    {"alpha", "drift kernel slope"},
    {"b", "drift kernel scale"},
    {"beta", "jump-rate dead zone"},
    {"delta", "reference level: strike, initial or a number"},
    {"paths", "Monte Carlo paths M"},
    {"exercise-points", "exercise dates M_E"},
    {"step", "fine time step h"},
};

struct Settings {
  std::map<std::string, std::string> values;
  std::string method;
  std::string seed;
  std::string threads;
  std::string out = "-";
  bool timing = false;
};

void add_model_flags(CLI::App* cmd, Settings& s, bool with_method) {
  if (with_method) {
    cmd->add_option("--method", s.method, "ls, ls-pdifmp or pdifmp")
        ->check(CLI::IsMember({"ls", "ls-pdifmp", "pdifmp"}));
  }
  for (const auto& [name, help] : kModelFlags) cmd->add_option("--" + name, s.values[name], help);
  cmd->add_option("--seed", s.seed, "RNG seed");
  cmd->add_option("--threads", s.threads, "worker cap (0: all cores); does not change results");
  cmd->add_option("--out", s.out, "output CSV path, '-' for stdout");
}

template <class Setter>
void forward(const CLI::App* cmd, const Settings& s, Setter&& set) {
  if (!s.method.empty()) set("method", s.method);
  for (const auto& [name, value] : s.values) {
    if (cmd->count("--" + name) > 0) set(name, value);
  }
  if (cmd->count("--seed") > 0) set("seed", s.seed);
  if (cmd->count("--threads") > 0) set("threads", s.threads);
}

ParamsHandle make_params(const CLI::App* cmd, const Settings& s) {
  pdifmp_params* raw = nullptr;
  check(pdifmp_params_create(&raw));
  ParamsHandle params(raw);
  forward(cmd, s, [&](const std::string& k, const std::string& v) {
    check(pdifmp_params_set(params.get(), k.c_str(), v.c_str()));
  });
  return params;
}

ExperimentHandle make_experiment(const std::string& id, const CLI::App* cmd, const Settings& s) {
  pdifmp_experiment* raw = nullptr;
  check(pdifmp_experiment_create(id.c_str(), &raw));
  ExperimentHandle experiment(raw);
  forward(cmd, s, [&](const std::string& k, const std::string& v) {
    check(pdifmp_experiment_set(experiment.get(), k.c_str(), v.c_str()));
  });
  return experiment;
}

// Strict non-negative integer parse; std::stoull alone accepts "-1" and "3x".
bool parse_count(const std::string& text, unsigned long long& out) {
  if (text.empty() || text.front() == '-') return false;
  try {
    std::size_t used = 0;
    out = std::stoull(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

const char* method_name(pdifmp_method m) {
  switch (m) {
    case PDIFMP_METHOD_LS_CLASSIC:
      return "ls";
    case PDIFMP_METHOD_LS_PDIFMP:
      return "ls-pdifmp";
    case PDIFMP_METHOD_PDIFMP_DIRECT:
      return "pdifmp";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo pricing of American options with LS and PDifMP path models"};
  app.set_version_flag("--version", std::string(pdifmp_version()));
  app.require_subcommand(1);

  Settings price_s;
  CLI::App* price_cmd = app.add_subcommand("price", "price one configuration, one CSV row");
  add_model_flags(price_cmd, price_s, true);
  price_cmd->add_flag("--timing", price_s.timing, "record wall-clock seconds in runtime_s");

  Settings exp_s;
  std::string exp_id;
  std::string exp_n;
  std::string exp_stride;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "run every cell of a named preset");
  exp_cmd->add_option("id", exp_id, "preset id (see `presets`)")->required();
  add_model_flags(exp_cmd, exp_s, false);
  exp_cmd->add_flag("--timing", exp_s.timing, "record wall-clock seconds in runtime_s");
  exp_cmd->add_option("--n", exp_n, "path presets: trajectories per file");
  exp_cmd->add_option("--stride", exp_stride, "path presets: keep every k-th grid point");

  Settings bench_s;
  std::string bench_id;
  std::string trials = "1";
  CLI::App* bench_cmd = app.add_subcommand("bench", "time each cell of a pricing preset");
  bench_cmd->add_option("id", bench_id, "pricing preset id")->required();
  add_model_flags(bench_cmd, bench_s, false);
  bench_cmd->add_option("--trials", trials, "timed repetitions per cell");

  Settings sim_s;
  std::string preset;
  std::string n = "1";
  std::string stride = "1";
  CLI::App* sim_cmd =
      app.add_subcommand("simulate-paths", "dump trajectories with jump markers for plotting");
  add_model_flags(sim_cmd, sim_s, true);
  sim_cmd->add_option("--preset", preset, "path preset; --out is then a file stem");
  sim_cmd->add_option("--n", n, "number of trajectories");
  sim_cmd->add_option("--stride", stride, "keep every k-th grid point (jumps always kept)");

  CLI::App* list_cmd = app.add_subcommand("presets", "list preset ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (price_cmd->parsed()) {
      ParamsHandle params = make_params(price_cmd, price_s);
      pdifmp_result result{};
      check(pdifmp_price_csv(params.get(), price_s.timing ? 1 : 0, price_s.out.c_str(), &result));
    } else if (exp_cmd->parsed()) {
      ExperimentHandle experiment = make_experiment(exp_id, exp_cmd, exp_s);
      if (exp_cmd->count("--n") > 0) check(pdifmp_experiment_set(experiment.get(), "n", exp_n.c_str()));
      if (exp_cmd->count("--stride") > 0) {
        check(pdifmp_experiment_set(experiment.get(), "stride", exp_stride.c_str()));
      }
      size_t rows = 0;
      check(pdifmp_experiment_run(experiment.get(), exp_s.timing ? 1 : 0, exp_s.out.c_str(), &rows));
    } else if (bench_cmd->parsed()) {
      ExperimentHandle experiment = make_experiment(bench_id, bench_cmd, bench_s);
      unsigned long long count = 0;
      if (!parse_count(trials, count) || count < 1) {
        std::fprintf(stderr, "pdifmp: invalid argument: --trials must be a positive integer\n");
        return 2;
      }
      check(pdifmp_experiment_bench(experiment.get(), count, bench_s.out.c_str()));
      const size_t rows = pdifmp_experiment_bench_rows(experiment.get());
      std::fprintf(stderr, "%-10s %8s %12s %12s\n", "method", "lambda0", "median_s", "mean_s");
      for (size_t i = 0; i < rows; ++i) {
        pdifmp_method m{};
        double lambda0 = 0.0, median = 0.0, mean = 0.0;
        check(pdifmp_experiment_bench_summary(experiment.get(), i, &m, &lambda0, &median, &mean));
        std::fprintf(stderr, "%-10s %8.3g %12.4f %12.4f\n", method_name(m), lambda0, median, mean);
      }
    } else if (sim_cmd->parsed()) {
      if (!preset.empty()) {
        ExperimentHandle experiment = make_experiment(preset, sim_cmd, sim_s);
        if (sim_cmd->count("--n") > 0) check(pdifmp_experiment_set(experiment.get(), "n", n.c_str()));
        check(pdifmp_experiment_set(experiment.get(), "stride", stride.c_str()));
        check(pdifmp_experiment_run(experiment.get(), 0, sim_s.out.c_str(), nullptr));
      } else {
        ParamsHandle params = make_params(sim_cmd, sim_s);
        if (sim_s.method.empty()) check(pdifmp_params_set(params.get(), "method", "pdifmp"));
        unsigned long long count = 0, every = 0;
        if (!parse_count(n, count) || !parse_count(stride, every)) {
          std::fprintf(stderr, "pdifmp: invalid argument: --n and --stride must be integers\n");
          return 2;
        }
        check(pdifmp_simulate_paths(params.get(), count, every, sim_s.out.c_str()));
      }
    } else if (list_cmd->parsed()) {
      for (size_t i = 0; i < pdifmp_preset_count(); ++i) {
        std::printf("%-16s %-8s %s\n", pdifmp_preset_id(i),
                    pdifmp_preset_is_paths(i) == 1 ? "paths" : "pricing",
                    pdifmp_preset_description(i));
      }
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
