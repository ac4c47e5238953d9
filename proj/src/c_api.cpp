#include "pdifmp/pdifmp.h"

#include <exception>
#include <fstream>
#include <iostream>
#include <new>
#include <string>
#include <vector>

#include "pdifmp/experiments.hpp"

struct pdifmp_params {
  pdifmp::ParamSet value;
};

struct pdifmp_experiment {
  pdifmp::ExperimentSpec spec;
  pdifmp::BenchReport last_bench;
};

namespace {

thread_local std::string last_error;

pdifmp_status fail(pdifmp_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, mapping library exceptions onto status codes.
template <class Body>
pdifmp_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return PDIFMP_OK;
  } catch (const pdifmp::InvalidArgument& e) {
    return fail(PDIFMP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const pdifmp::IoError& e) {
    return fail(PDIFMP_ERR_IO, e.what());
  } catch (const pdifmp::ConfigError& e) {
    const std::string what = e.what();
    return fail(what.rfind("unknown preset", 0) == 0 ? PDIFMP_ERR_UNKNOWN_PRESET : PDIFMP_ERR_CONFIG,
                what);
  } catch (const std::bad_alloc&) {
    return fail(PDIFMP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PDIFMP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PDIFMP_ERR_INTERNAL, "unknown error");
  }
}

pdifmp_method to_c(pdifmp::Method m) {
  switch (m) {
    case pdifmp::Method::LsClassic:
      return PDIFMP_METHOD_LS_CLASSIC;
    case pdifmp::Method::LsPdifmp:
      return PDIFMP_METHOD_LS_PDIFMP;
    case pdifmp::Method::PdifmpDirect:
      return PDIFMP_METHOD_PDIFMP_DIRECT;
  }
  return PDIFMP_METHOD_LS_CLASSIC;
}

void fill(const pdifmp::PricingResult& r, pdifmp_result* out) {
  if (!out) return;
  out->price = r.price;
  out->std_error = r.std_error;
  out->runtime_s = r.runtime;
  out->n_paths = r.n_paths;
  out->flagged_paths = r.flagged_paths;
  out->negative_drifts = r.negative_drifts;
  out->seed = r.seed;
  out->method = to_c(r.method);
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw pdifmp::InvalidArgument(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

std::string path_or_stdout(const char* out_path) { return out_path ? out_path : "-"; }

}  // namespace

extern "C" {

uint32_t pdifmp_abi_version(void) { return PDIFMP_ABI_VERSION; }

const char* pdifmp_version(void) { return "1.0.0"; }

const char* pdifmp_last_error(void) { return last_error.c_str(); }

const char* pdifmp_status_name(pdifmp_status status) {
  switch (status) {
    case PDIFMP_OK:
      return "ok";
    case PDIFMP_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case PDIFMP_ERR_CONFIG:
      return "configuration error";
    case PDIFMP_ERR_IO:
      return "I/O error";
    case PDIFMP_ERR_UNKNOWN_PRESET:
      return "unknown preset";
    case PDIFMP_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

pdifmp_status pdifmp_params_create(pdifmp_params** out) {
  if (!out) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] { *out = new pdifmp_params{}; });
}

void pdifmp_params_destroy(pdifmp_params* params) { delete params; }

pdifmp_status pdifmp_params_set(pdifmp_params* params, const char* key, const char* value) {
  if (!params || !key || !value) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { params->value.set(key, value); });
}

pdifmp_status pdifmp_params_get(const pdifmp_params* params, const char* key, double* value) {
  if (!params || !key || !value) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  const pdifmp::ParamSet& p = params->value;
  const std::string k = key;
  if (k == "s0") *value = p.market.s0;
  else if (k == "strike") *value = p.market.strike;
  else if (k == "r") *value = p.market.r;
  else if (k == "sigma") *value = p.market.sigma;
  else if (k == "maturity") *value = p.market.maturity;
  else if (k == "mu0") *value = p.jump.mu0;
  else if (k == "lambda0") *value = p.jump.lambda0;
  else if (k == "eta") *value = p.jump.eta;
  else if (k == "alpha") *value = p.jump.alpha;
  else if (k == "b") *value = p.jump.b;
  else if (k == "beta") *value = p.jump.beta;
  else if (k == "delta") *value = pdifmp::resolve_delta(p.jump.delta, p.market);
  else if (k == "paths") *value = static_cast<double>(p.paths);
  else if (k == "exercise-points") *value = static_cast<double>(p.exercise_points);
  else if (k == "step") *value = p.effective_step();
  else if (k == "seed") *value = static_cast<double>(p.seed);
  else return fail(PDIFMP_ERR_INVALID_ARGUMENT, "unknown parameter '" + k + "'");
  last_error.clear();
  return PDIFMP_OK;
}

pdifmp_status pdifmp_price(const pdifmp_params* params, pdifmp_result* out) {
  if (!params || !out) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { fill(pdifmp::price(params->value), out); });
}

pdifmp_status pdifmp_price_csv(const pdifmp_params* params, int record_runtime,
                               const char* out_path, pdifmp_result* out) {
  if (!params) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    // Reuses the experiment writer so a single run and a table share one format.
    const pdifmp::ParamSet& p = params->value;
    const pdifmp::PricingResult result = pdifmp::price(p);
    fill(result, out);
    const std::vector<pdifmp::ResultRow> rows{pdifmp::make_row(p, result, record_runtime != 0)};
    const std::string path = path_or_stdout(out_path);
    if (path == "-") {
      pdifmp::write_result_csv(std::cout, rows);
      std::cout.flush();
    } else {
      std::ofstream file(path, std::ios::binary | std::ios::trunc);
      if (!file) throw pdifmp::IoError("cannot open '" + path + "' for writing");
      pdifmp::write_result_csv(file, rows);
      if (!file.flush()) throw pdifmp::IoError("write to '" + path + "' failed");
    }
  });
}

pdifmp_status pdifmp_simulate_paths(const pdifmp_params* params, uint64_t n_paths,
                                    uint64_t stride, const char* out_path) {
  if (!params) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pdifmp::simulate_paths(params->value, n_paths, stride, path_or_stdout(out_path));
  });
}

size_t pdifmp_preset_count(void) { return pdifmp::presets().size(); }

const char* pdifmp_preset_id(size_t index) {
  const auto& all = pdifmp::presets();
  return index < all.size() ? all[index].id.c_str() : nullptr;
}

const char* pdifmp_preset_description(size_t index) {
  const auto& all = pdifmp::presets();
  return index < all.size() ? all[index].description.c_str() : nullptr;
}

int pdifmp_preset_is_paths(size_t index) {
  const auto& all = pdifmp::presets();
  if (index >= all.size()) return -1;
  return all[index].kind == pdifmp::PresetKind::Paths ? 1 : 0;
}

pdifmp_status pdifmp_experiment_create(const char* id, pdifmp_experiment** out) {
  if (!id || !out) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pdifmp::find_preset(id);
    auto* experiment = new pdifmp_experiment{};
    experiment->spec.id = id;
    *out = experiment;
  });
}

void pdifmp_experiment_destroy(pdifmp_experiment* experiment) { delete experiment; }

pdifmp_status pdifmp_experiment_set(pdifmp_experiment* experiment, const char* key,
                                    const char* value) {
  if (!experiment || !key || !value) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pdifmp::ExperimentSpec& spec = experiment->spec;
    const std::string k = key;
    // Validate the override against a scratch row before keeping it.
    if (k == "n" || k == "stride") {
      const std::size_t n = parse_count(k, value);
      if (k == "n") spec.path_count = n;
      else spec.stride = n;
      return;
    }
    pdifmp::ParamSet scratch;
    if (k != "method") scratch.set(k, value);
    if (k == "seed") {
      spec.seed = scratch.seed;
    } else if (k == "threads") {
      spec.threads = scratch.threads;
    } else {
      spec.overrides.emplace_back(k, value);
    }
  });
}

pdifmp_status pdifmp_experiment_run(pdifmp_experiment* experiment, int record_runtime,
                                    const char* out_path, size_t* rows_written) {
  if (!experiment) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pdifmp::ExperimentSpec spec = experiment->spec;
    spec.out_path = path_or_stdout(out_path);
    spec.record_runtime = record_runtime != 0;
    const auto rows = pdifmp::run_experiment(spec);
    if (rows_written) *rows_written = rows.size();
  });
}

pdifmp_status pdifmp_experiment_bench(pdifmp_experiment* experiment, uint64_t trials,
                                      const char* out_path) {
  if (!experiment) return fail(PDIFMP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pdifmp::ExperimentSpec spec = experiment->spec;
    spec.out_path = path_or_stdout(out_path);
    experiment->last_bench = pdifmp::bench(spec, trials);
  });
}

size_t pdifmp_experiment_bench_rows(const pdifmp_experiment* experiment) {
  return experiment ? experiment->last_bench.summary.size() : 0;
}

pdifmp_status pdifmp_experiment_bench_summary(const pdifmp_experiment* experiment, size_t index,
                                              pdifmp_method* method, double* lambda0,
                                              double* median_s, double* mean_s) {
  if (!experiment || index >= experiment->last_bench.summary.size()) {
    return fail(PDIFMP_ERR_INVALID_ARGUMENT, "bench summary index out of range");
  }
  const pdifmp::BenchSummary& row = experiment->last_bench.summary[index];
  if (method) *method = to_c(pdifmp::parse_method(row.method));
  if (lambda0) *lambda0 = row.lambda0;
  if (median_s) *median_s = row.median_s;
  if (mean_s) *mean_s = row.mean_s;
  last_error.clear();
  return PDIFMP_OK;
}

}  // extern "C"
