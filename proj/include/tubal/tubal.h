/* C interface to the tubal library. Every handle is opaque and owned by the
 * caller once returned; release it with the matching *_destroy function.
 * Functions returning tubal_status leave a message for tubal_last_error()
 * on failure. Error state is per thread. */
#ifndef TUBAL_TUBAL_H
#define TUBAL_TUBAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TUBAL_BUILDING_LIBRARY)
#    define TUBAL_API __declspec(dllexport)
#  else
#    define TUBAL_API __declspec(dllimport)
#  endif
#else
#  define TUBAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tubal_status {
  TUBAL_OK = 0,
  TUBAL_ERR_INVALID_ARGUMENT = 1,
  TUBAL_ERR_SHAPE_MISMATCH = 2,
  TUBAL_ERR_RANK_OUT_OF_RANGE = 3,
  TUBAL_ERR_INDEX_OUT_OF_RANGE = 4,
  TUBAL_ERR_NUMERIC_FAILURE = 5,
  TUBAL_ERR_RESIDUAL_IMAGINARY = 6,
  TUBAL_ERR_TOLERANCE_NOT_MET = 7,
  TUBAL_ERR_IO = 8,
  TUBAL_ERR_BAD_FORMAT = 9,
  TUBAL_ERR_TRUNCATED_PAYLOAD = 10,
  TUBAL_ERR_OUT_OF_MEMORY = 11,
  TUBAL_ERR_INTERNAL = 12
} tubal_status;

typedef enum tubal_factor_kind {
  TUBAL_FACTORS_TTT = 1,
  TUBAL_FACTORS_TT_REAL = 2,
  TUBAL_FACTORS_TT_COMPLEX = 3
} tubal_factor_kind;

typedef struct tubal_tensor tubal_tensor;
typedef struct tubal_factors tubal_factors;
typedef struct tubal_completion tubal_completion;
typedef struct tubal_metric_report tubal_metric_report;

/* ---- library ---- */

TUBAL_API const char* tubal_version(void);
/* Message of the last failed call on this thread; "" if none. */
TUBAL_API const char* tubal_last_error(void);
TUBAL_API const char* tubal_status_name(tubal_status status);
/* Caps threads used by slice loops; 0 restores the default. */
TUBAL_API tubal_status tubal_set_threads(int n);
TUBAL_API void tubal_string_free(char* s);

/* ---- tensors (float64, column-major, tube mode last) ---- */

/* data may be NULL for a zero tensor; otherwise numel values are copied. */
TUBAL_API tubal_status tubal_tensor_create(const size_t* dims, size_t order, const double* data, tubal_tensor** out);
TUBAL_API tubal_status tubal_tensor_clone(const tubal_tensor* x, tubal_tensor** out);
TUBAL_API void tubal_tensor_destroy(tubal_tensor* x);
TUBAL_API size_t tubal_tensor_order(const tubal_tensor* x);
TUBAL_API size_t tubal_tensor_numel(const tubal_tensor* x);
/* Copies min(order, capacity) dimensions. */
TUBAL_API tubal_status tubal_tensor_dims(const tubal_tensor* x, size_t* dims, size_t capacity);
TUBAL_API const double* tubal_tensor_data(const tubal_tensor* x);
TUBAL_API double* tubal_tensor_data_mut(tubal_tensor* x);
/* In place; the product of dims must equal numel. */
TUBAL_API tubal_status tubal_tensor_reshape(tubal_tensor* x, const size_t* dims, size_t order);

/* TensorFile, binary PGM/PPM or ASCII matrix, chosen by content. */
TUBAL_API tubal_status tubal_tensor_read(const char* path, tubal_tensor** out);
TUBAL_API tubal_status tubal_tensor_write(const char* path, const tubal_tensor* x);
TUBAL_API tubal_status tubal_image_read(const char* path, tubal_tensor** out);
TUBAL_API tubal_status tubal_image_write(const char* path, const tubal_tensor* x);
/* Multi-line summary of any supported file; free with tubal_string_free. */
TUBAL_API tubal_status tubal_describe_file(const char* path, char** out);

TUBAL_API tubal_status tubal_tprod(const tubal_tensor* x, const tubal_tensor* y, tubal_tensor** out);
TUBAL_API tubal_status tubal_relative_error(const tubal_tensor* reference, const tubal_tensor* estimate, double* out);

/* ---- decompositions ---- */

/* ranks: internal (N-1) or boundary-augmented (N+1) profile. */
TUBAL_API tubal_status tubal_ttt_svd(const tubal_tensor* x, const size_t* ranks, size_t n_ranks, tubal_factors** out);
TUBAL_API tubal_status tubal_ttt_svd_tol(const tubal_tensor* x, double eps, tubal_factors** out);

typedef struct tubal_tatcu_info {
  double relative_error; /* achieved, or best reached on TOLERANCE_NOT_MET */
  size_t refinements;
} tubal_tatcu_info;

/* info may be NULL. On TUBAL_ERR_TOLERANCE_NOT_MET *out is NULL and
 * info->relative_error holds the best error reached. */
TUBAL_API tubal_status tubal_tatcu(const tubal_tensor* x, double eps, size_t max_refinements, tubal_factors** out,
                                   tubal_tatcu_info* info);
TUBAL_API tubal_status tubal_tt_svd(const tubal_tensor* x, const size_t* ranks, size_t n_ranks, tubal_factors** out);
TUBAL_API tubal_status tubal_tt_svd_tol(const tubal_tensor* x, double eps, tubal_factors** out);
/* Third-order input; stored as a two-core TTT (u, s * v^T). */
TUBAL_API tubal_status tubal_tsvd(const tubal_tensor* x, size_t rank, tubal_factors** out);
TUBAL_API tubal_status tubal_tsvd_tol(const tubal_tensor* x, double eps, tubal_factors** out);

TUBAL_API tubal_status tubal_ttt_param_count(const size_t* modes, size_t n_modes, const size_t* ranks, size_t n_ranks,
                                             size_t tube_length, size_t* out);

/* ---- factor sets ---- */

TUBAL_API void tubal_factors_destroy(tubal_factors* f);
TUBAL_API tubal_status tubal_factors_read(const char* path, tubal_factors** out);
TUBAL_API tubal_status tubal_factors_write(const char* path, const tubal_factors* f);
TUBAL_API tubal_factor_kind tubal_factors_kind(const tubal_factors* f);
TUBAL_API size_t tubal_factors_order(const tubal_factors* f);
/* 1 for TT kinds. */
TUBAL_API size_t tubal_factors_tube_length(const tubal_factors* f);
/* Boundary-augmented ranks, order + 1 entries. */
TUBAL_API tubal_status tubal_factors_ranks(const tubal_factors* f, size_t* ranks, size_t capacity);
TUBAL_API tubal_status tubal_factors_mode_sizes(const tubal_factors* f, size_t* modes, size_t capacity);
TUBAL_API size_t tubal_factors_param_count(const tubal_factors* f);
/* Local truncation errors of sequential methods; *count receives the total. */
TUBAL_API tubal_status tubal_factors_local_errors(const tubal_factors* f, double* out, size_t capacity, size_t* count);
TUBAL_API tubal_status tubal_factors_contract(const tubal_factors* f, tubal_tensor** out);
/* Copy of core n (0-based); real kinds only. */
TUBAL_API tubal_status tubal_factors_core(const tubal_factors* f, size_t n, tubal_tensor** out);

/* ---- completion ---- */

typedef enum tubal_backend {
  TUBAL_BACKEND_TTT_RANKS = 1,
  TUBAL_BACKEND_TTT_TOL = 2,
  TUBAL_BACKEND_TSVD = 3
} tubal_backend;

typedef struct tubal_completion_options {
  tubal_backend backend;
  const size_t* ranks; /* TTT_RANKS */
  size_t n_ranks;
  double eps;          /* TTT_TOL */
  size_t tsvd_rank;    /* TSVD */
  size_t max_iters;
  double stop_tol;
} tubal_completion_options;

typedef struct tubal_completion_step {
  size_t iteration;
  double relative_change; /* NaN on the first iteration */
  double observed_error;
  double full_error;      /* valid when has_full_error */
  int has_full_error;
} tubal_completion_step;

TUBAL_API void tubal_completion_options_init(tubal_completion_options* o);
/* truth may be NULL. */
TUBAL_API tubal_status tubal_complete(const tubal_tensor* observed, const tubal_tensor* mask, const tubal_tensor* truth,
                                      const tubal_completion_options* options, tubal_completion** out);
TUBAL_API void tubal_completion_destroy(tubal_completion* c);
TUBAL_API tubal_status tubal_completion_estimate(const tubal_completion* c, tubal_tensor** out);
TUBAL_API size_t tubal_completion_iterations(const tubal_completion* c);
TUBAL_API int tubal_completion_converged(const tubal_completion* c);
TUBAL_API tubal_status tubal_completion_step_at(const tubal_completion* c, size_t i, tubal_completion_step* out);

/* ---- metrics ---- */

typedef struct tubal_metric_options {
  double peak;
  size_t ssim_window;
  size_t uiqi_window;
  double ergas_ratio;
} tubal_metric_options;

typedef struct tubal_metrics {
  double mse;
  double psnr_db; /* +inf when mse == 0 */
  double rmse;
  double rel_err;
  double ssim;
  double uiqi;
  double ergas;
  double sam_deg;
  int has_ssim;
  int has_uiqi;
  int has_ergas;
  size_t uiqi_skipped;
  size_t sam_skipped;
  size_t bands;
  double psnr_band_mean_db; /* mean of per-band PSNRs */
} tubal_metrics;

typedef struct tubal_band_metrics {
  double mse;
  double psnr_db;
  double rmse;
  double ssim;
  double uiqi;
  int has_ssim;
  int has_uiqi;
} tubal_band_metrics;

TUBAL_API void tubal_metric_options_init(tubal_metric_options* o);
TUBAL_API tubal_status tubal_metric_report_compute(const tubal_tensor* reference, const tubal_tensor* estimate,
                                                   const tubal_metric_options* options, tubal_metric_report** out);
TUBAL_API void tubal_metric_report_destroy(tubal_metric_report* r);
TUBAL_API void tubal_metric_report_summary(const tubal_metric_report* r, tubal_metrics* out);
TUBAL_API tubal_status tubal_metric_report_band(const tubal_metric_report* r, size_t band, tubal_band_metrics* out);
/* Bands whose reference mean is zero, which make ERGAS undefined. */
TUBAL_API tubal_status tubal_metric_report_ergas_zero_bands(const tubal_metric_report* r, size_t* out, size_t capacity,
                                                            size_t* count);
TUBAL_API tubal_status tubal_data_max(const tubal_tensor* x, double* out);

/* ---- synthetic data (seeded, portable) ---- */

/* Contraction of a TTT with standard normal cores, plus noise scaled to
 * noise * ||x||_F. */
TUBAL_API tubal_status tubal_gen_ttt(const size_t* modes, size_t n_modes, const size_t* ranks, size_t n_ranks,
                                     size_t tube_length, uint64_t seed, double noise, tubal_tensor** out);
TUBAL_API tubal_status tubal_gen_tsvd(size_t i1, size_t i2, size_t tube_length, size_t rank, uint64_t seed, double noise,
                                      tubal_tensor** out);
/* Entries are 0 (missing) with probability missing_fraction. */
TUBAL_API tubal_status tubal_gen_mask(const size_t* dims, size_t order, double missing_fraction, uint64_t seed,
                                      tubal_tensor** out);
TUBAL_API tubal_status tubal_apply_mask(const tubal_tensor* x, const tubal_tensor* mask, tubal_tensor** out);

#ifdef __cplusplus
}
#endif

#endif
