#ifndef SOPSLAB_SOPSLAB_H
#define SOPSLAB_SOPSLAB_H

#include <stddef.h>

#if defined(SOPSLAB_BUILDING_LIBRARY)
#define SOPSLAB_API __attribute__((visibility("default")))
#else
#define SOPSLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sopslab_status {
  SOPSLAB_OK = 0,
  SOPSLAB_ERR_DOMAIN = 1,
  SOPSLAB_ERR_CONFIG = 2,
  SOPSLAB_ERR_PRECONDITION = 3,
  SOPSLAB_ERR_NUMERICAL = 4,
  SOPSLAB_ERR_NONCONVERGENCE = 5,
  SOPSLAB_ERR_IO = 6,
  SOPSLAB_ERR_BUFFER_TOO_SMALL = 7,
  SOPSLAB_ERR_INVALID_ARGUMENT = 8,
  SOPSLAB_ERR_INTERNAL = 9
} sopslab_status;

/* Message for the most recent failure on the calling thread; "" after success. */
SOPSLAB_API const char* sopslab_last_error(void);
/* Best periodicity defect reached by the last failed sopslab_sops_find on this thread. */
SOPSLAB_API double sopslab_last_best_residual(void);
SOPSLAB_API const char* sopslab_status_name(sopslab_status s);
SOPSLAB_API const char* sopslab_version(void);

/* Buffers follow one pattern: pass cap = 0 (buffer may be NULL) to learn the
   required count; a short buffer yields SOPSLAB_ERR_BUFFER_TOO_SMALL with the
   count still written. Strings count their terminating NUL. */

typedef struct sopslab_profile {
  double alpha, a, b;
  double rho1, rho2;
  double q1, q2, omega_star;
  double r0, delta_disc;
  int swapped;
} sopslab_profile;

SOPSLAB_API sopslab_status sopslab_make_profile(double alpha, double a, double b, sopslab_profile* out);
SOPSLAB_API sopslab_status sopslab_nu_star(const sopslab_profile* p, double re, double im, double* out_re,
                                           double* out_im);
SOPSLAB_API sopslab_status sopslab_nu_star_level_root(const sopslab_profile* p, double level, int upper,
                                                      double* out);
SOPSLAB_API sopslab_status sopslab_hopf_beta(double alpha, double fprime0, double* out);
SOPSLAB_API sopslab_status sopslab_limiting_dominant(const sopslab_profile* p, double re, double im,
                                                     double s, double* out_re, double* out_im);

/* tag: 0 stable region, 1 unstable region, 2 indeterminate. */
SOPSLAB_API sopslab_status sopslab_cassini_classify(const sopslab_profile* p, double re, double im,
                                                    double delta, int* tag, double* modulus);
SOPSLAB_API sopslab_status sopslab_cassini_boundary(const sopslab_profile* p, double delta, int nsamples,
                                                    double* re, double* im, size_t cap, size_t* count,
                                                    int* failed_rays, int* lobes);
/* region: 0 A<1 (or A>0), 1 A>1 (or A<0), 2 neither. */
SOPSLAB_API sopslab_status sopslab_region_near_one(const sopslab_profile* p, double re, double im,
                                                   int* region);
SOPSLAB_API sopslab_status sopslab_region_near_zero(const sopslab_profile* p, double re, double im,
                                                    int* region);

typedef struct sopslab_feedback sopslab_feedback;

SOPSLAB_API sopslab_status sopslab_feedback_tanh(double a, double b, sopslab_feedback** out);
SOPSLAB_API sopslab_status sopslab_feedback_load_csv(const char* path, sopslab_feedback** out);
SOPSLAB_API void sopslab_feedback_free(sopslab_feedback* f);
SOPSLAB_API sopslab_status sopslab_feedback_limits(const sopslab_feedback* f, double* a, double* b,
                                                   double* fprime0);
SOPSLAB_API sopslab_status sopslab_feedback_eval(const sopslab_feedback* f, double xi, double* value,
                                                 double* deriv);
/* JSON array of {name, passed, detail}; *all_passed set when non-NULL. */
SOPSLAB_API sopslab_status sopslab_feedback_validate(const sopslab_feedback* f, double half_width,
                                                     double tol, int* all_passed, char* json,
                                                     size_t cap, size_t* needed);

typedef struct sopslab_sops_options {
  double h, tol, transient, max_time;
} sopslab_sops_options;

typedef struct sopslab_sops_summary {
  double alpha, beta, omega, z1, z2, h, residual;
  size_t samples;
} sopslab_sops_summary;

typedef struct sopslab_residuals {
  double z1, z2, omega, profile, derivative;
} sopslab_residuals;

typedef struct sopslab_sops sopslab_sops;

SOPSLAB_API void sopslab_sops_options_default(sopslab_sops_options* o);
SOPSLAB_API sopslab_status sopslab_sops_find(double alpha, double beta, const sopslab_feedback* f,
                                             const sopslab_sops_options* opts, sopslab_sops** out);
SOPSLAB_API void sopslab_sops_free(sopslab_sops* s);
SOPSLAB_API sopslab_status sopslab_sops_summary_of(const sopslab_sops* s, sopslab_sops_summary* out);
SOPSLAB_API sopslab_status sopslab_sops_samples(const sopslab_sops* s, double* t, double* p, double* pdot,
                                                size_t cap, size_t* count);
SOPSLAB_API sopslab_status sopslab_sops_residuals(const sopslab_sops* s, double eps, sopslab_residuals* out);
SOPSLAB_API sopslab_status sopslab_sops_write(const sopslab_sops* s, const char* csv_path,
                                              const char* json_path);

typedef struct sopslab_coupling sopslab_coupling;

typedef struct sopslab_structure {
  int row_sum_ok, irreducible, nonneg_entries, symmetric, positive_semidefinite, positive_definite;
  double min_sym_eigenvalue;
} sopslab_structure;

SOPSLAB_API sopslab_status sopslab_coupling_mean_field(int n, double kappa, sopslab_coupling** out);
SOPSLAB_API sopslab_status sopslab_coupling_ring(int n, double kappa1, double kappa2, sopslab_coupling** out);
/* Row-major n*n entries; rows must sum to 1. */
SOPSLAB_API sopslab_status sopslab_coupling_from_rows(int n, const double* entries, sopslab_coupling** out);
SOPSLAB_API sopslab_status sopslab_coupling_load_csv(const char* path, sopslab_coupling** out);
SOPSLAB_API void sopslab_coupling_free(sopslab_coupling* c);
SOPSLAB_API sopslab_status sopslab_coupling_size(const sopslab_coupling* c, int* n);
SOPSLAB_API sopslab_status sopslab_coupling_entries(const sopslab_coupling* c, double* rows, size_t cap,
                                                    size_t* count);
SOPSLAB_API sopslab_status sopslab_coupling_eigenvalues(const sopslab_coupling* c, double* re, double* im,
                                                        size_t cap, size_t* count);
/* sigma_{-1}; *one_is_simple set when non-NULL. */
SOPSLAB_API sopslab_status sopslab_coupling_sigma_minus_one(const sopslab_coupling* c, double* re,
                                                            double* im, size_t cap, size_t* count,
                                                            int* one_is_simple);
SOPSLAB_API sopslab_status sopslab_coupling_structure(const sopslab_coupling* c, sopslab_structure* out);
SOPSLAB_API sopslab_status sopslab_ring_spectrum(int n, double kappa1, double kappa2, double* re, double* im,
                                                 size_t cap, size_t* count);
SOPSLAB_API sopslab_status sopslab_solve_ring_kappa(int n, int j, double re, double im, double* kappa1,
                                                    double* kappa2);

SOPSLAB_API sopslab_status sopslab_dominant_multiplier(const sopslab_sops* s, double re, double im, int m,
                                                       double* out_re, double* out_im, double* radius,
                                                       int* unique);
/* Eigenvalues of M_lambda with modulus >= floor, by descending modulus. */
SOPSLAB_API sopslab_status sopslab_multipliers(const sopslab_sops* s, double re, double im, int m,
                                               double floor, double* out_re, double* out_im, size_t cap,
                                               size_t* count);
SOPSLAB_API sopslab_status sopslab_decomposition_check(const sopslab_sops* s, const sopslab_coupling* c,
                                                       int m, double tol, double* hausdorff, int* passed);

typedef enum sopslab_verdict_kind {
  SOPSLAB_STABLE = 0,
  SOPSLAB_UNSTABLE = 1,
  SOPSLAB_INDETERMINATE = 2
} sopslab_verdict_kind;

typedef struct sopslab_verdict sopslab_verdict;

SOPSLAB_API void sopslab_verdict_free(sopslab_verdict* v);
SOPSLAB_API sopslab_status sopslab_verdict_kind_of(const sopslab_verdict* v, sopslab_verdict_kind* out);
SOPSLAB_API sopslab_status sopslab_verdict_rule(const sopslab_verdict* v, char* buf, size_t cap,
                                                size_t* needed);
SOPSLAB_API sopslab_status sopslab_verdict_caveat(const sopslab_verdict* v, char* buf, size_t cap,
                                                  size_t* needed);
SOPSLAB_API sopslab_status sopslab_verdict_witness_count(const sopslab_verdict* v, size_t* count);
SOPSLAB_API sopslab_status sopslab_verdict_witness(const sopslab_verdict* v, size_t i, double* re, double* im,
                                                   double* value);
SOPSLAB_API sopslab_status sopslab_verdict_json(const sopslab_verdict* v, char* buf, size_t cap,
                                                size_t* needed);

SOPSLAB_API sopslab_status sopslab_classify_general(const sopslab_profile* p, const sopslab_coupling* c,
                                                    double delta, sopslab_verdict** out);
/* H: row-major n*n with zero row sums; sign is +1 or -1. */
SOPSLAB_API sopslab_status sopslab_classify_weak(int n, const double* H, int sign, sopslab_verdict** out);
SOPSLAB_API sopslab_status sopslab_classify_near_uniform(const sopslab_profile* p, int n, const double* H,
                                                         int sign, sopslab_verdict** out);
SOPSLAB_API sopslab_status sopslab_classify_doubly_nonneg(const sopslab_profile* p, const sopslab_coupling* c,
                                                          double eps, sopslab_verdict** out);
SOPSLAB_API sopslab_status sopslab_classify_mean_field(const sopslab_profile* p, int n, double kappa,
                                                       double eps, sopslab_verdict** out);
SOPSLAB_API sopslab_status sopslab_classify_ring_symmetric(const sopslab_profile* p, int n, double kappa,
                                                           double eps, double delta, sopslab_verdict** out);
SOPSLAB_API sopslab_status sopslab_classify_empirical(const sopslab_sops* s, const sopslab_coupling* c, int m,
                                                      double margin, sopslab_verdict** out);

typedef struct sopslab_trajectory sopslab_trajectory;

/* History offset + slope * theta per component on [-1, 0]. */
SOPSLAB_API sopslab_status sopslab_simulate_ramp(double alpha, double beta, const sopslab_feedback* f,
                                                 const sopslab_coupling* c, const double* offset,
                                                 const double* slope, double horizon, double h,
                                                 sopslab_trajectory** out);
/* samples[i*n + j]: component j at theta = -1 + i/m, i = 0..m. */
SOPSLAB_API sopslab_status sopslab_simulate_tabulated(double alpha, double beta, const sopslab_feedback* f,
                                                      const sopslab_coupling* c, const double* samples,
                                                      int m, double horizon, double h,
                                                      sopslab_trajectory** out);
SOPSLAB_API void sopslab_trajectory_free(sopslab_trajectory* tr);
SOPSLAB_API sopslab_status sopslab_trajectory_dim(const sopslab_trajectory* tr, int* dim, double* t_end);
SOPSLAB_API sopslab_status sopslab_trajectory_eval(const sopslab_trajectory* tr, double t, double* values);
SOPSLAB_API sopslab_status sopslab_trajectory_write_csv(const sopslab_trajectory* tr, const double* times,
                                                        size_t count, const char* path);
SOPSLAB_API sopslab_status sopslab_sync_measure(const sopslab_trajectory* tr, double window,
                                                const double* times, size_t count, double* g);
SOPSLAB_API sopslab_status sopslab_log_slope(const double* t, const double* g, size_t count, double t0,
                                             double t1, double* slope);

typedef struct sopslab_figure_spec {
  double alpha, a, b;
  double beta;  /* <= 0 selects beta_Hopf + 0.01 */
  double target_re, target_im;
  double perturbation;
  double horizon, h, sample_dt, fit_t0, fit_t1;
} sopslab_figure_spec;

typedef struct sopslab_figure_summary {
  double beta, kappa1, kappa2, lambda_re, lambda_im, nu_re, nu_im, slope;
  size_t samples;
} sopslab_figure_summary;

typedef struct sopslab_figure sopslab_figure;

SOPSLAB_API void sopslab_figure_spec_default(sopslab_figure_spec* spec);
SOPSLAB_API sopslab_status sopslab_figure_run(const sopslab_figure_spec* spec, sopslab_figure** out);
SOPSLAB_API void sopslab_figure_free(sopslab_figure* fig);
SOPSLAB_API sopslab_status sopslab_figure_summary_of(const sopslab_figure* fig, sopslab_figure_summary* out);
SOPSLAB_API sopslab_status sopslab_figure_series(const sopslab_figure* fig, double* t, double* g, size_t cap,
                                                 size_t* count);
SOPSLAB_API sopslab_status sopslab_figure_write_csv(const sopslab_figure* fig, const char* path);

#ifdef __cplusplus
}
#endif

#endif
