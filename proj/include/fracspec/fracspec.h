#ifndef FRACSPEC_FRACSPEC_H
#define FRACSPEC_FRACSPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FS_API __declspec(dllexport)
#else
#define FS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
  FS_OK = 0,
  FS_ERR_DOMAIN = 1,
  FS_ERR_ACCURACY = 2,
  FS_ERR_CONVERGENCE = 3,
  FS_ERR_NOT_SPD = 4,
  FS_ERR_CONFIG = 5,
  FS_ERR_IO = 6,
  FS_ERR_NULL = 7,
  FS_ERR_INTERNAL = 8
} fs_status;

typedef enum fs_format { FS_FORMAT_CSV = 0, FS_FORMAT_JSON = 1 } fs_format;

typedef struct fs_spectrum fs_spectrum;
typedef struct fs_sweep fs_sweep;
typedef struct fs_validation fs_validation;

/* Message of the last failed call on this thread; "" after a success. */
FS_API const char* fs_last_error(void);
FS_API const char* fs_status_name(fs_status status);
FS_API const char* fs_version(void);

/* "csv" / "json" */
FS_API fs_status fs_parse_format(const char* name, fs_format* out);

/* ---- single solve ---------------------------------------------------- */

typedef struct fs_problem {
  double alpha;
  double beta;
  double a;
  double b;
  int elements;
  /* eigenvectors for the first `vector_count` pairs; negative means all */
  long vector_count;
  uint64_t seed;
} fs_problem;

/* alpha = beta = 1, (0, 1), N = 200, all vectors, seed 0 */
FS_API fs_problem fs_problem_default(void);

FS_API fs_status fs_solve(const fs_problem* problem, fs_spectrum** out);
FS_API void fs_spectrum_free(fs_spectrum* spectrum);

FS_API fs_status fs_spectrum_size(const fs_spectrum* spectrum, size_t* count);
/* index is 1-based */
FS_API fs_status fs_spectrum_eigenvalue(const fs_spectrum* spectrum, size_t index, double* re, double* im);
FS_API fs_status fs_spectrum_residual(const fs_spectrum* spectrum, size_t index, double* residual);

typedef struct fs_summary {
  size_t eigenvalue_count;
  size_t real_count;
  size_t complex_pair_count;
  double cone_margin;
  double principal_re;
  double principal_im;
  int principal_positive;
  size_t vectors_unconverged;
} fs_summary;

FS_API fs_status fs_spectrum_summary(const fs_spectrum* spectrum, fs_summary* out);

/* Nodal eigenfunction values including both endpoints. Writes up to
 * `capacity` entries and stores the node count in *nodes. Any output array
 * may be NULL. */
FS_API fs_status fs_spectrum_eigenfunction(const fs_spectrum* spectrum, size_t index, double* x, double* re_u,
                                           double* im_u, size_t capacity, size_t* nodes);

FS_API fs_status fs_spectrum_write(const fs_spectrum* spectrum, const char* path, fs_format format);
FS_API fs_status fs_report_write(const fs_spectrum* spectrum, const char* path);
FS_API fs_status fs_eigenfunction_write(const fs_spectrum* spectrum, size_t index, const char* path,
                                        fs_format format);
/* x, re_u1, im_u1, ... for the first `count` eigenfunctions */
FS_API fs_status fs_vectors_write(const fs_spectrum* spectrum, size_t count, const char* path);

/* ---- sweeps ---------------------------------------------------------- */

typedef struct fs_range {
  double lo;
  double hi;
  int steps;
} fs_range;

/* "lo:hi:steps" */
FS_API fs_status fs_parse_range(const char* text, fs_range* out);

typedef enum fs_sweep_kind {
  FS_SWEEP_GRID = 0,      /* alpha x beta */
  FS_SWEEP_DIAGONAL = 1,  /* beta = alpha */
  FS_SWEEP_FIXED_SUM = 2  /* beta = sum - alpha */
} fs_sweep_kind;

typedef struct fs_sweep_config {
  fs_sweep_kind kind;
  fs_range alpha;
  fs_range beta;
  double sum;
  double a;
  double b;
  int elements;
} fs_sweep_config;

typedef struct fs_sweep_row {
  double alpha;
  double beta;
  double lambda1_re;
  double lambda1_im;
  size_t real_count;
  double cone_margin;
  double largest_real_before_complex;
  /* NULL on success; owned by the sweep handle */
  const char* error;
} fs_sweep_row;

FS_API fs_status fs_sweep_run(const fs_sweep_config* config, fs_sweep** out);
FS_API void fs_sweep_free(fs_sweep* sweep);
FS_API fs_status fs_sweep_size(const fs_sweep* sweep, size_t* rows);
FS_API fs_status fs_sweep_row_at(const fs_sweep* sweep, size_t i, fs_sweep_row* row);
/* Infeasible grid points that were skipped: *count receives their number,
 * alpha and beta the i-th one when i < *count. */
FS_API fs_status fs_sweep_skipped(const fs_sweep* sweep, size_t i, double* alpha, double* beta, size_t* count);
FS_API fs_status fs_sweep_write(const fs_sweep* sweep, const char* path, fs_format format);

/* ---- acceptance suite ------------------------------------------------ */

FS_API fs_status fs_validate(uint64_t seed, double perturb_k, fs_validation** out);
FS_API void fs_validation_free(fs_validation* validation);
FS_API fs_status fs_validation_all_pass(const fs_validation* validation, int* all_pass);
FS_API fs_status fs_validation_count(const fs_validation* validation, size_t* count);
/* name and detail are owned by the handle; detail is "" when absent */
FS_API fs_status fs_validation_criterion(const fs_validation* validation, size_t i, int* id, const char** name,
                                         int* pass, const char** detail);
/* JSON summary, owned by the handle */
FS_API fs_status fs_validation_json(const fs_validation* validation, const char** json);
FS_API fs_status fs_validation_write(const fs_validation* validation, const char* path);

#ifdef __cplusplus
}
#endif

#endif
