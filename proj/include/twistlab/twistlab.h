/* Copyright 2026 The twistlab Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libtwistlab.
 *
 * Every fallible call returns a twl_status. On failure the message is
 * available from twl_last_error() on the calling thread until the next call.
 * Output structs are only written on TWL_OK.
 *
 * Dimensions (rows n, columns m) are limited to TWL_MAX_DIM so that witnesses
 * and per-row vectors fit in fixed-size structs.
 */

#ifndef TWISTLAB_TWISTLAB_H
#define TWISTLAB_TWISTLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(TWL_BUILDING_LIBRARY)
#define TWL_API __attribute__((visibility("default")))
#else
#define TWL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define TWL_MAX_DIM 8
#define TWL_TEXT 96

typedef enum twl_status { TWL_OK = 0, TWL_ERR_INTERNAL = 1, TWL_ERR_USAGE = 2, TWL_ERR_RESOURCE = 3 } twl_status;

typedef enum twl_truth { TWL_FALSE = 0, TWL_TRUE = 1, TWL_INDETERMINATE = 2 } twl_truth;

typedef struct twl_matrix twl_matrix;
typedef struct twl_weights twl_weights;
typedef struct twl_psi twl_psi;
typedef struct twl_ubiquity twl_ubiquity;
typedef struct twl_dim twl_dim;

/* A real input. Exact when `exact` is set (num/den), otherwise `value`, which
 * is still read exactly when its shortest decimal form round-trips. */
typedef struct twl_scalar {
  int exact;
  int64_t num;
  int64_t den;
  double value;
} twl_scalar;

typedef struct twl_exec {
  unsigned workers;
  uint64_t point_budget;
} twl_exec;

TWL_API const char* twl_version(void);
TWL_API const char* twl_last_error(void);
TWL_API twl_exec twl_exec_default(void);

TWL_API twl_scalar twl_real(double value);
TWL_API twl_scalar twl_rational(int64_t num, int64_t den);
/* "3", "-1/3", "0.125", "1e-3". */
TWL_API twl_status twl_scalar_parse(const char* text, twl_scalar* out);
/* Canonical text of a scalar ("1/3", "0.4" is "2/5"). */
TWL_API twl_status twl_scalar_format(twl_scalar s, char* buf, size_t cap);

/* ---- matrices, weights, approximation functions ---- */

/* Preset name, "file:<path>", a plain path to an existing file, or inline
 * "a,b;c,d". */
TWL_API twl_status twl_matrix_load(const char* source, twl_matrix** out);
TWL_API twl_status twl_matrix_parse(const char* text, twl_matrix** out);
TWL_API void twl_matrix_free(twl_matrix* a);
TWL_API size_t twl_matrix_rows(const twl_matrix* a);
TWL_API size_t twl_matrix_cols(const twl_matrix* a);
TWL_API int twl_matrix_is_exact(const twl_matrix* a);
TWL_API twl_status twl_matrix_entry_text(const twl_matrix* a, size_t i, size_t j, char* buf, size_t cap);

/* Comma list of exponents; NULL or "" gives (1, ..., 1) of size dim. */
TWL_API twl_status twl_weights_parse(const char* text, size_t dim, twl_weights** out);
TWL_API void twl_weights_free(twl_weights* w);
TWL_API size_t twl_weights_size(const twl_weights* w);
TWL_API double twl_weights_get(const twl_weights* w, size_t i);
TWL_API twl_status twl_weights_text(const twl_weights* w, char* buf, size_t cap);

/* "pow:c,tau" or "tab:r1=y1,..." per function, ';'-separated; one function is
 * replicated to n rows. */
TWL_API twl_status twl_psi_parse(const char* text, size_t n, twl_psi** out);
TWL_API void twl_psi_free(twl_psi* psi);
TWL_API twl_status twl_psi_eval(const twl_psi* psi, double r, double* out);

/* ---- geometry ---- */

TWL_API twl_status twl_quasi_norm(const double* x, const twl_weights* w, double* out);

/* ---- lattice ---- */

typedef struct twl_witness {
  size_t m;
  size_t n;
  int64_t q[TWL_MAX_DIM];
  int64_t p[TWL_MAX_DIM];
  double residuals[TWL_MAX_DIM];
  double qnorm;
} twl_witness;

typedef void (*twl_vector_sink)(const int64_t* q, size_t m, void* user);

TWL_API twl_status twl_enumerate_ball(const twl_weights* alpha, twl_scalar radius, const twl_exec* exec,
                                      twl_vector_sink sink, void* user);
TWL_API twl_status twl_count_ball(const twl_weights* alpha, twl_scalar radius, uint64_t* out);

TWL_API twl_status twl_best_profile(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                    twl_scalar radius, const twl_exec* exec, double* value, twl_witness* witness);

TWL_API twl_status twl_level_in_l(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar eps,
                                  int level, const twl_exec* exec, twl_truth* out, uint64_t* indeterminate);

typedef struct twl_level_record {
  int level;
  twl_truth in_l;
  double best_value;
  int has_witness;
  twl_witness witness;
  uint64_t indeterminate;
} twl_level_record;

typedef struct twl_level_summary {
  uint64_t indeterminate_total;
  uint64_t comparisons;
} twl_level_summary;

/* `levels` receives max_level records. */
TWL_API twl_status twl_level_set_prefix(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                        twl_scalar eps, int max_level, const twl_exec* exec, twl_level_record* levels,
                                        twl_level_summary* summary);

/* Window q0 <= |q|_alpha < q1. */
TWL_API twl_status twl_badness(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar q0,
                               twl_scalar q1, const twl_exec* exec, double* value, twl_witness* witness);

typedef enum twl_verdict {
  TWL_BAD_LIKE = 0,
  TWL_NON_SINGULAR_LIKE = 1,
  TWL_SINGULAR_LIKE = 2,
  TWL_INCONCLUSIVE = 3
} twl_verdict;

TWL_API const char* twl_verdict_name(twl_verdict v);

typedef struct twl_classify_options {
  double tail_fraction;
  double top_half_fraction;
} twl_classify_options;

TWL_API twl_classify_options twl_classify_defaults(void);

typedef struct twl_eps_summary {
  int true_count;
  int trailing_true;
  int top_half_true;
  int top_half_size;
  int cofinite;
  int empty_tail;
  int infinite_looking;
} twl_eps_summary;

typedef struct twl_classification {
  twl_verdict verdict;
  uint64_t indeterminate_total;
  uint64_t comparisons;
} twl_classification;

/* `per_eps` receives eps_count entries; `levels` (optional) receives
 * eps_count * max_level records, grouped by epsilon. */
TWL_API twl_status twl_classify(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                const twl_scalar* eps, size_t eps_count, int max_level,
                                const twl_classify_options* options, const twl_exec* exec, twl_classification* out,
                                twl_eps_summary* per_eps, twl_level_record* levels);

/* ---- transference ---- */

TWL_API twl_status twl_compute_c1(twl_scalar c, twl_scalar big_n, const twl_scalar* v, size_t n,
                                  const twl_scalar* alpha, size_t m, double* out);
TWL_API twl_status twl_compute_c2(twl_scalar eps, const twl_scalar* v, size_t n, const twl_scalar* alpha, size_t m,
                                  double* out);

TWL_API twl_status twl_homogeneous_empty(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                         twl_scalar c, twl_scalar big_n, const twl_exec* exec, twl_truth* out,
                                         uint64_t* indeterminate);

/* First q with |q|_alpha < norm_bound and |A_i.q - b_i - p_i| < radii_i
 * (<= when `inclusive`). */
TWL_API twl_status twl_inhomogeneous_solve(const twl_matrix* a, const twl_weights* alpha, const twl_scalar* b,
                                           const twl_scalar* radii, twl_scalar norm_bound, int inclusive,
                                           const twl_exec* exec, twl_truth* found, twl_witness* witness,
                                           uint64_t* indeterminate);

/* `out` receives n * count coordinates. */
TWL_API twl_status twl_sample_shifts(size_t n, size_t count, uint64_t seed, double* out);

typedef struct twl_shift_check {
  double b[TWL_MAX_DIM];
  twl_truth solved;
  int has_witness;
  twl_witness witness;
  int in_proof_box;
} twl_shift_check;

typedef struct twl_transference_summary {
  double base;
  double c1;
  double radii[TWL_MAX_DIM];
  double norm_bound;
  size_t passes;
  size_t failures;
  size_t indeterminate;
  size_t in_proof_box;
} twl_transference_summary;

/* `shifts` holds count * n coordinates; `checks` (optional) count entries. */
TWL_API twl_status twl_verify_transference(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                           twl_scalar c, twl_scalar big_n, const double* shifts, size_t count,
                                           const twl_exec* exec, twl_transference_summary* out,
                                           twl_shift_check* checks);

typedef struct twl_level_transference_row {
  int level;
  double radii[TWL_MAX_DIM];
  double norm_bound;
  size_t passes;
  size_t failures;
  size_t indeterminate;
} twl_level_transference_row;

typedef struct twl_level_transference_summary {
  double c2;
  size_t levels_in_l;
  size_t failures;
  uint64_t indeterminate_total;
} twl_level_transference_summary;

/* `rows` receives up to max_level entries, one per level of the prefix in L. */
TWL_API twl_status twl_verify_level_transference(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                                 twl_scalar eps, int max_level, size_t shifts_per_level, uint64_t seed,
                                                 const twl_exec* exec, twl_level_transference_summary* out,
                                                 twl_level_transference_row* rows);

/* ---- series and measure ---- */

/* `out` receives min(count, level_count) partial sums. */
TWL_API twl_status twl_dyadic_series(const twl_psi* psi, size_t m, const int* levels, size_t level_count, size_t count,
                                     double* out);
/* `out` receives `cutoff` partial sums. */
TWL_API twl_status twl_radial_series(const twl_psi* psi, size_t m, uint64_t cutoff, double* out);
TWL_API twl_status twl_growth_exponent(const double* sums, size_t count, double* out);
TWL_API twl_status twl_hypothesis_ratio(const twl_psi* psi, const twl_weights* v, size_t m, int max_level, double* out);

typedef struct twl_borel_cantelli {
  double constant;
  double volume_sum;
  double series_sum;
  double bound;
  int shells;
} twl_borel_cantelli;

TWL_API twl_status twl_borel_cantelli_bound(const twl_psi* psi, const twl_weights* alpha, int shells,
                                            const twl_exec* exec, twl_borel_cantelli* out);

/* `witnesses` (optional) receives up to witness_cap entries. */
TWL_API twl_status twl_hit_count(const twl_scalar* b, const twl_matrix* a, const twl_psi* psi, const twl_weights* alpha,
                                 twl_scalar q_max, size_t witness_cap, const twl_exec* exec, uint64_t* count,
                                 twl_witness* witnesses, size_t* witness_count, uint64_t* indeterminate);

typedef enum twl_method { TWL_GRID = 0, TWL_MONTE_CARLO = 1 } twl_method;

TWL_API const char* twl_method_name(twl_method m);

typedef struct twl_estimator {
  twl_method method;
  double grid_step;
  uint64_t samples;
  uint64_t seed;
} twl_estimator;

TWL_API twl_estimator twl_estimator_default(size_t n, uint64_t seed);

typedef struct twl_measure_estimate {
  double q;
  double value;
  twl_method method;
  double resolution;
  double half_width;
  uint64_t seed;
} twl_measure_estimate;

/* Union over tail_start < |q|_alpha <= Q for each cutoff; `out` receives
 * count entries. */
TWL_API twl_status twl_limsup_measure(const twl_matrix* a, const twl_psi* psi, const twl_weights* alpha,
                                      const twl_scalar* cutoffs, size_t count, const twl_estimator* est,
                                      twl_scalar tail_start, const twl_exec* exec, twl_measure_estimate* out);

typedef struct twl_equidist {
  uint64_t in_box;
  uint64_t total;
  double ratio;
} twl_equidist;

/* B is the open torus box center +- radii. */
TWL_API twl_status twl_equidist_ratio(const twl_matrix* a, const twl_weights* alpha, const double* center,
                                      const double* radii, twl_scalar big_n, const twl_exec* exec, twl_equidist* out);

typedef struct twl_ubiquity_options {
  int has_c3;
  twl_scalar c3;
  int allow_inadmissible;
} twl_ubiquity_options;

TWL_API twl_status twl_ubiquity_create(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                       twl_scalar eps, int max_level, const twl_ubiquity_options* options,
                                       const twl_exec* exec, twl_ubiquity** out);
TWL_API void twl_ubiquity_free(twl_ubiquity* u);

typedef struct twl_ubiquity_info {
  double eps;
  double c2;
  double c3;
  double c3_bound;
  int admissible;
  size_t levels;
} twl_ubiquity_info;

typedef struct twl_ubiquity_level {
  int level;
  double upper;
  double lower;
  double rho[TWL_MAX_DIM];
} twl_ubiquity_level;

TWL_API twl_status twl_ubiquity_get_info(const twl_ubiquity* u, twl_ubiquity_info* out);
TWL_API twl_status twl_ubiquity_get_level(const twl_ubiquity* u, size_t k, twl_ubiquity_level* out);

typedef struct twl_coverage {
  double fraction;
  double half_width;
  uint64_t resonant_points;
  uint64_t cells;
} twl_coverage;

/* k is 0-based into the levels of `u`. */
TWL_API twl_status twl_ubiquity_coverage(const twl_matrix* a, const twl_weights* alpha, const twl_ubiquity* u, size_t k,
                                         const double* center, const double* radii, const twl_estimator* est,
                                         const twl_exec* exec, twl_coverage* out);

/* ---- dimension ---- */

TWL_API twl_status twl_dim_unweighted(size_t m, size_t n, const twl_scalar* tau, twl_dim** out);
TWL_API twl_status twl_dim_weighted_2d(size_t m, const twl_scalar* v, const twl_scalar* tau, twl_dim** out);
TWL_API twl_status twl_dim_mtprr(const twl_scalar* a, const twl_scalar* t, size_t n, twl_dim** out);
TWL_API void twl_dim_free(twl_dim* d);

typedef struct twl_dim_info {
  double value;
  char value_text[TWL_TEXT];
  size_t pivots;
  size_t argmin;
  size_t conditions;
  int cross_check; /* -1 when not computed */
} twl_dim_info;

typedef struct twl_pivot_row {
  double pivot;
  char pivot_text[TWL_TEXT];
  double d;
  char d_text[TWL_TEXT];
  int k1[TWL_MAX_DIM];
  size_t k1_size;
  int k2[TWL_MAX_DIM];
  size_t k2_size;
  int k3[TWL_MAX_DIM];
  size_t k3_size;
} twl_pivot_row;

typedef struct twl_condition {
  char name[160];
  double lhs;
  double rhs;
  int holds;
} twl_condition;

TWL_API twl_status twl_dim_get_info(const twl_dim* d, twl_dim_info* out);
TWL_API twl_status twl_dim_get_pivot(const twl_dim* d, size_t i, twl_pivot_row* out);
TWL_API twl_status twl_dim_get_condition(const twl_dim* d, size_t i, twl_condition* out);

/* j is 1-based. */
TWL_API twl_status twl_upper_cover_exponent(size_t m, const twl_scalar* tau, size_t n, size_t j, double* out,
                                            char* text, size_t cap);

typedef enum twl_box_cover { TWL_COVER_UNION = 0, TWL_COVER_SHELL = 1 } twl_box_cover;

typedef struct twl_box_count {
  double delta;
  uint64_t boxes;
  uint64_t total;
  uint64_t rectangles;
  int excluded;
  char reason[16];
} twl_box_count;

typedef struct twl_box_dim {
  double slope;
  double intercept;
  double residual;
  size_t used;
  char note[TWL_TEXT];
} twl_box_dim;

/* `counts` receives delta_count entries. */
TWL_API twl_status twl_box_dim_estimate(const twl_matrix* a, const twl_psi* psi, const twl_weights* alpha,
                                        twl_scalar q_max, const double* deltas, size_t delta_count, twl_box_cover mode,
                                        const twl_exec* exec, twl_box_dim* out, twl_box_count* counts);

#ifdef __cplusplus
}
#endif

#endif /* TWISTLAB_TWISTLAB_H */
