/*
 * C interface to the pdifmp pricing library.
 *
 * All functions return a pdifmp_status. On failure the thread-local message
 * from pdifmp_last_error() describes the problem. Handles are opaque and
 * must be released with the matching *_destroy function.
 */
#ifndef PDIFMP_PDIFMP_H_
#define PDIFMP_PDIFMP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PDIFMP_BUILDING)
#    define PDIFMP_API __declspec(dllexport)
#  else
#    define PDIFMP_API __declspec(dllimport)
#  endif
#else
#  define PDIFMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define PDIFMP_ABI_VERSION 1u

typedef enum pdifmp_status {
  PDIFMP_OK = 0,
  PDIFMP_ERR_INVALID_ARGUMENT = 1,
  PDIFMP_ERR_CONFIG = 2,
  PDIFMP_ERR_IO = 3,
  PDIFMP_ERR_UNKNOWN_PRESET = 4,
  PDIFMP_ERR_INTERNAL = 5
} pdifmp_status;

typedef enum pdifmp_method {
  PDIFMP_METHOD_LS_CLASSIC = 0,
  PDIFMP_METHOD_LS_PDIFMP = 1,
  PDIFMP_METHOD_PDIFMP_DIRECT = 2
} pdifmp_method;

typedef struct pdifmp_result {
  double price;
  double std_error;
  double runtime_s;
  uint64_t n_paths;
  uint64_t flagged_paths;
  uint64_t negative_drifts;
  uint64_t seed;
  pdifmp_method method;
} pdifmp_result;

/* Parameters for one pricing run or one path dump. */
typedef struct pdifmp_params pdifmp_params;

/* A named preset plus overrides. */
typedef struct pdifmp_experiment pdifmp_experiment;

PDIFMP_API uint32_t pdifmp_abi_version(void);
PDIFMP_API const char* pdifmp_version(void);
PDIFMP_API const char* pdifmp_last_error(void);
PDIFMP_API const char* pdifmp_status_name(pdifmp_status status);

PDIFMP_API pdifmp_status pdifmp_params_create(pdifmp_params** out);
PDIFMP_API void pdifmp_params_destroy(pdifmp_params* params);
/* Keys: method option s0 strike r sigma maturity mu0 lambda0 eta alpha b
 * beta delta paths exercise-points step seed threads. Values are text, as on
 * the command line (delta accepts strike, initial or a number). */
PDIFMP_API pdifmp_status pdifmp_params_set(pdifmp_params* params, const char* key,
                                           const char* value);
PDIFMP_API pdifmp_status pdifmp_params_get(const pdifmp_params* params, const char* key,
                                           double* value);

PDIFMP_API pdifmp_status pdifmp_price(const pdifmp_params* params, pdifmp_result* out);
/* Prices and writes a one-row result CSV to out_path ("-" or NULL: stdout).
 * runtime_s is written as 0 unless record_runtime is non-zero. */
PDIFMP_API pdifmp_status pdifmp_price_csv(const pdifmp_params* params, int record_runtime,
                                          const char* out_path, pdifmp_result* out);
/* Writes n_paths trajectories in long format (path,t,s,mu,jump,n_jumps). */
PDIFMP_API pdifmp_status pdifmp_simulate_paths(const pdifmp_params* params, uint64_t n_paths,
                                               uint64_t stride, const char* out_path);

PDIFMP_API size_t pdifmp_preset_count(void);
PDIFMP_API const char* pdifmp_preset_id(size_t index);
PDIFMP_API const char* pdifmp_preset_description(size_t index);
/* 1 for path presets, 0 for pricing tables, -1 for a bad index. */
PDIFMP_API int pdifmp_preset_is_paths(size_t index);

PDIFMP_API pdifmp_status pdifmp_experiment_create(const char* id, pdifmp_experiment** out);
PDIFMP_API void pdifmp_experiment_destroy(pdifmp_experiment* experiment);
/* Same keys as pdifmp_params_set; applied to every row of the preset.
 * Path presets also take "n" (trajectories per file) and "stride". */
PDIFMP_API pdifmp_status pdifmp_experiment_set(pdifmp_experiment* experiment, const char* key,
                                               const char* value);
PDIFMP_API pdifmp_status pdifmp_experiment_run(pdifmp_experiment* experiment, int record_runtime,
                                               const char* out_path, size_t* rows_written);
/* Times each preset row `trials` times and writes per-trial CSV rows.
 * The summary is available through pdifmp_experiment_bench_summary. */
PDIFMP_API pdifmp_status pdifmp_experiment_bench(pdifmp_experiment* experiment, uint64_t trials,
                                                 const char* out_path);
PDIFMP_API size_t pdifmp_experiment_bench_rows(const pdifmp_experiment* experiment);
/* Median per-trial seconds for summary row `index`, with its method and
 * lambda0. Returns PDIFMP_ERR_INVALID_ARGUMENT for a bad index. */
PDIFMP_API pdifmp_status pdifmp_experiment_bench_summary(const pdifmp_experiment* experiment,
                                                         size_t index, pdifmp_method* method,
                                                         double* lambda0, double* median_s,
                                                         double* mean_s);

#ifdef __cplusplus
}
#endif

#endif /* PDIFMP_PDIFMP_H_ */
