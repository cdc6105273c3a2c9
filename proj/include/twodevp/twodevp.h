/* Copyright 2026 The twodevp Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the twodevp solvers. All objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every fallible
 * call returns a twodevp_status; the message of the last failure on the
 * calling thread is available from twodevp_last_error().
 */
#ifndef TWODEVP_TWODEVP_H_
#define TWODEVP_TWODEVP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TWODEVP_API __declspec(dllexport)
#else
#define TWODEVP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twodevp_status {
  TWODEVP_OK = 0,
  TWODEVP_INVALID_ARGUMENT = 1,
  TWODEVP_DIMENSION_MISMATCH = 2,
  TWODEVP_PARSE_ERROR = 3,
  TWODEVP_IO_ERROR = 4,
  TWODEVP_NOT_INDEFINITE = 5,
  TWODEVP_SINGULAR = 6,
  TWODEVP_UNSTABLE = 7,
  TWODEVP_NUMERICAL = 8,
  TWODEVP_UNSUPPORTED = 9,
  TWODEVP_INTERNAL = 100
} twodevp_status;

/* Hermitian pair (A, C) for the two-parameter eigenvalue solver. */
typedef struct twodevp_pair twodevp_pair;
/* Pair of Hermitian operators (A, B) for the minmax solver. */
typedef struct twodevp_minmax twodevp_minmax;
/* General stable square matrix for distance-to-instability. */
typedef struct twodevp_matrix twodevp_matrix;
/* Outcome of any solver call: a JSON document, optional CSV, numbers. */
typedef struct twodevp_result twodevp_result;

TWODEVP_API const char* twodevp_version(void);
TWODEVP_API const char* twodevp_status_string(twodevp_status s);
/* Empty string when the last call on this thread succeeded. */
TWODEVP_API const char* twodevp_last_error(void);

/* --- pairs ---------------------------------------------------------------- */

TWODEVP_API twodevp_status twodevp_pair_example61(twodevp_pair** out);
TWODEVP_API twodevp_status twodevp_pair_random(size_t n, uint64_t seed,
                                               twodevp_pair** out);
/* Matrix Market files for A and C. */
TWODEVP_API twodevp_status twodevp_pair_load(const char* a_path,
                                             const char* c_path,
                                             twodevp_pair** out);
/* Column-major n x n complex matrices as interleaved (re, im) doubles. */
TWODEVP_API twodevp_status twodevp_pair_from_dense(size_t n, const double* a,
                                                   const double* c,
                                                   twodevp_pair** out);
TWODEVP_API twodevp_status twodevp_pair_save(const twodevp_pair* p,
                                             const char* a_path,
                                             const char* c_path);
TWODEVP_API size_t twodevp_pair_dim(const twodevp_pair* p);
TWODEVP_API void twodevp_pair_free(twodevp_pair* p);

/* --- minmax problems ------------------------------------------------------ */

/* Relay precoder matrices from complex Gaussian channels; dimension m * m. */
TWODEVP_API twodevp_status twodevp_minmax_mimo(size_t m, uint64_t seed,
                                               twodevp_minmax** out);
TWODEVP_API twodevp_status twodevp_minmax_load(const char* a_path,
                                               const char* b_path,
                                               twodevp_minmax** out);
TWODEVP_API twodevp_status twodevp_minmax_save(const twodevp_minmax* p,
                                               const char* a_path,
                                               const char* b_path);
TWODEVP_API size_t twodevp_minmax_dim(const twodevp_minmax* p);
TWODEVP_API void twodevp_minmax_free(twodevp_minmax* p);

/* --- stable matrices ------------------------------------------------------ */

TWODEVP_API twodevp_status twodevp_matrix_orr_sommerfeld(size_t n,
                                                         double reynolds,
                                                         twodevp_matrix** out);
TWODEVP_API twodevp_status twodevp_matrix_random_stable(size_t m,
                                                        uint64_t seed,
                                                        twodevp_matrix** out);
TWODEVP_API twodevp_status twodevp_matrix_load(const char* path,
                                               twodevp_matrix** out);
TWODEVP_API twodevp_status twodevp_matrix_from_dense(size_t m,
                                                     const double* data,
                                                     twodevp_matrix** out);
TWODEVP_API twodevp_status twodevp_matrix_save(const twodevp_matrix* p,
                                               const char* path);
TWODEVP_API size_t twodevp_matrix_dim(const twodevp_matrix* p);
TWODEVP_API void twodevp_matrix_free(twodevp_matrix* p);

/* --- solvers -------------------------------------------------------------- */

typedef struct twodevp_solve_options {
  double tol;        /* <= 0 selects n * machine epsilon */
  int maxit;
  int stagnation_check;
  uint64_t rng_seed;
  int timing;        /* add elapsed seconds to the history */
} twodevp_solve_options;

TWODEVP_API void twodevp_solve_options_init(twodevp_solve_options* o);

/* Starts from the eigenvectors of A - mu0 C nearest lambda0. */
TWODEVP_API twodevp_status twodevp_solve(const twodevp_pair* p, double mu0,
                                         double lambda0,
                                         const twodevp_solve_options* o,
                                         twodevp_result** out);

typedef struct twodevp_rqminmax_options {
  double reltol;
  double backtol;    /* <= 0 selects n * machine epsilon */
  double abstol;
  int max_outer;
  int maxit;
  uint64_t rng_seed;
} twodevp_rqminmax_options;

TWODEVP_API void twodevp_rqminmax_options_init(twodevp_rqminmax_options* o);
TWODEVP_API twodevp_status twodevp_rqminmax(const twodevp_minmax* p,
                                            const twodevp_rqminmax_options* o,
                                            twodevp_result** out);

typedef struct twodevp_dti_options {
  double tol;        /* <= 0 selects m * machine epsilon */
  double reltol;
  int maxit;
  int validate;
  int stagnation_check;
  int timing;
} twodevp_dti_options;

TWODEVP_API void twodevp_dti_options_init(twodevp_dti_options* o);
TWODEVP_API twodevp_status twodevp_dti(const twodevp_matrix* p,
                                       const twodevp_dti_options* o,
                                       twodevp_result** out);
/* Hamiltonian check at (1 - reltol) lambda; "passed", "failed", "skipped". */
TWODEVP_API twodevp_status twodevp_dti_validate(const twodevp_matrix* p,
                                                double lambda, double reltol,
                                                twodevp_result** out);

/* --- oracles -------------------------------------------------------------- */

TWODEVP_API twodevp_status twodevp_oracle_eigencurves(const twodevp_pair* p,
                                                      double mu_lo,
                                                      double mu_hi, int points,
                                                      twodevp_result** out);
TWODEVP_API twodevp_status twodevp_oracle_evopt(const twodevp_minmax* p,
                                                double lo, double hi,
                                                double tol_width, double eps_r,
                                                twodevp_result** out);
TWODEVP_API twodevp_status twodevp_oracle_dti_scan(const twodevp_matrix* p,
                                                   double mu_lo, double mu_hi,
                                                   int points,
                                                   twodevp_result** out);

/* --- bench ---------------------------------------------------------------- */

typedef struct twodevp_bench_options {
  int grid;
  int instances;
  size_t m;
  double evopt_tol;
  size_t n;
  double reynolds;
  double mu_lo, mu_hi;
  int points;
  int maxit;
  uint64_t seed;
  int timing;
} twodevp_bench_options;

TWODEVP_API void twodevp_bench_options_init(twodevp_bench_options* o);
/* name: table61, table62, basin-map, mimo-evopt or dti-orr. */
TWODEVP_API twodevp_status twodevp_bench(const char* name,
                                         const twodevp_bench_options* o,
                                         twodevp_result** out);

/* --- results -------------------------------------------------------------- */

/* Pretty-printed JSON; valid until the result is freed. */
TWODEVP_API const char* twodevp_result_json(const twodevp_result* r);
/* CSV text, or an empty string when the call produces none. */
TWODEVP_API const char* twodevp_result_csv(const twodevp_result* r);
/* Top-level numeric or boolean field; NOT_FOUND maps to INVALID_ARGUMENT. */
TWODEVP_API twodevp_status twodevp_result_number(const twodevp_result* r,
                                                 const char* key, double* out);
/* Top-level string field; valid until the result is freed. */
TWODEVP_API const char* twodevp_result_string(const twodevp_result* r,
                                              const char* key);
/* Nonzero when the solver met its stopping criterion. */
TWODEVP_API int twodevp_result_converged(const twodevp_result* r);
TWODEVP_API void twodevp_result_free(twodevp_result* r);

#ifdef __cplusplus
}
#endif

#endif /* TWODEVP_TWODEVP_H_ */
