/*
 * superlab - numerical laboratory for superefficiency: affinity and
 * total-variation computations, estimator concentration probabilities,
 * asymptotic-efficiency approximation, and certified interval-shrinking
 * parameter extraction for the Gaussian location model.
 *
 * C API over the C++ core. All functions return a status code; compound
 * results are returned as JSON strings allocated by the library and released
 * with slab_string_free(). Rational parameters are passed as strings, either
 * "p/q" or decimal ("0.05", "-1.25e-2"), and are parsed exactly.
 *
 * Thread safety: all operations are pure functions of their inputs; handles
 * are immutable after creation. The last-error message is thread local.
 */
#ifndef SUPERLAB_H
#define SUPERLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct slab_model slab_model;
typedef struct slab_estimator slab_estimator;

/* Status codes (the CLI maps these directly to exit codes). */
enum {
  SLAB_OK = 0,
  SLAB_ERR = 1,                      /* unexpected internal failure */
  SLAB_ERR_INVALID = 2,              /* invalid argument / config / domain */
  SLAB_ERR_WIDTH = 3,                /* no admissible n for the interval width */
  SLAB_NO_SUPEREFFICIENT_POINT = 4,  /* informational: empty suitable set */
  SLAB_ERR_ASSUMPTION = 5            /* a certified bound was violated */
};

const char* slab_version(void);

/* Message for the most recent failing call on this thread. */
const char* slab_last_error(void);

void slab_string_free(char* s);

/* ---- models ---------------------------------------------------------- */

/* N(theta, sigma^2)^n with known sigma; open parameter interval
 * (theta_lo, theta_hi), infinities allowed. */
int slab_model_create(double sigma, double theta_lo, double theta_hi,
                      slab_model** out);
void slab_model_free(slab_model* model);

int slab_estimator_mle(slab_estimator** out);
int slab_estimator_hodges(double pivot, slab_estimator** out);
int slab_estimator_constant(double value, slab_estimator** out);
/* Adversarial two-pivot Hodges variant (diagnostic control). */
int slab_estimator_two_pivot_hodges(double pivot1, double pivot2,
                                    slab_estimator** out);
void slab_estimator_free(slab_estimator* estimator);

int slab_normal_cdf(double x, double* out);
int slab_log_normal_cdf(double x, double* out);

int slab_affinity_gaussian(const slab_model* model, double theta1,
                           double theta2, long n, double* out);
int slab_tv_gaussian(const slab_model* model, double theta1, double theta2,
                     long n, double* out);

int slab_affinity_discrete_np(const double* p, const double* q, int k,
                              double* out);
/* Exhaustive 2^k oracle, k <= 20. witness (nullable): k flags, 1 when the
 * outcome is in the minimising event. */
int slab_affinity_discrete_bruteforce(const double* p, const double* q, int k,
                                      double* out, int* witness);
int slab_tv_discrete(const double* p, const double* q, int k, double* out);
int slab_affinity_lower_bound_from_tv(double tv, double* out);

/* Slack table for Assumption 1, 2, or 4 (which in {1,2,4}) over a grid of
 * (theta1, theta2, n) triples. */
int slab_check_assumption_json(const slab_model* model, int which, double theta,
                               const double* theta1, const double* theta2,
                               const long* n, int len, double epsilon,
                               char** json);

/* Log-likelihood-ratio decomposition check plus KS report for Delta. */
int slab_check_lan_json(const slab_model* model, double theta, double lambda,
                        long n, long samples, unsigned long long seed,
                        char** json);

/* ---- estimators ------------------------------------------------------ */

int slab_estimate(const slab_estimator* estimator, long n, double sample_mean,
                  double* out);

int slab_concentration_exact(const slab_model* model,
                             const slab_estimator* estimator, double theta,
                             long n, double radius, double center,
                             double* prob);
int slab_concentration_exact_log(const slab_model* model,
                                 const slab_estimator* estimator, double theta,
                                 long n, double radius, double center,
                                 double* log_prob);
/* full_sample != 0 draws n observations per replication instead of the
 * sufficient statistic (validation mode). */
int slab_concentration_mc(const slab_model* model,
                          const slab_estimator* estimator, double theta, long n,
                          double radius, double center, long samples,
                          unsigned long long seed, int full_sample,
                          double* prob, double* std_error);

int slab_mle_bound_check_json(const slab_model* model, double c,
                              const long* n_list, int len, double theta,
                              char** json);

/* ---- efficiency ------------------------------------------------------ */

int slab_ae_estimate_json(const slab_model* model,
                          const slab_estimator* estimator, double theta,
                          const double* c_grid, int nc, const long* n_grid,
                          int nn, char** json);

int slab_corollary3_json(const slab_model* model, const double* theta_list,
                         int nt, const double* c_grid, int nc,
                         const long* n_grid, int nn, char** json);

/* ---- extraction ------------------------------------------------------ */

/* Extraction configuration; rational fields are strings (see above). */
typedef struct slab_extraction_config {
  const char* c;        /* > 0 */
  const char* a;        /* in (0,1) */
  const char* i_bar;    /* > I(q) on (L, R) */
  const char* epsilon;  /* > 0 */
  const char* L;
  const char* R;
  long n_min;           /* 1 for the exact Gaussian model */
  long grid_points;     /* >= 16 */
  double tolerance;     /* target interval width */
  long max_iterations;
} slab_extraction_config;

/* Runs the interval-shrinking extraction. Returns SLAB_OK whenever a trace
 * was produced; the trace's "outcome" field distinguishes converged /
 * no_superefficient_point / width_error / assumption_violation. text
 * (nullable) receives the plain-text per-iteration rendering. */
int slab_extract_json(const slab_model* model, const slab_estimator* estimator,
                      const slab_extraction_config* config, char** json,
                      char** text);

/* q1, q2 are rational strings. */
int slab_lemma1_check_json(const slab_model* model,
                           const slab_estimator* estimator, const char* q1,
                           const char* q2, long n,
                           const slab_extraction_config* config, char** json);

int slab_countability_json(const slab_model* model,
                           const slab_estimator* estimator,
                           const slab_extraction_config* config, long n_max,
                           char** json);

/* Largest epsilon in {2^-k} satisfying the exclusion-lemma premise for
 * (c, a, i_bar); returned as a rational string. */
int slab_suggest_epsilon(const char* c, const char* a, const char* i_bar,
                         char** epsilon);

#ifdef __cplusplus
}
#endif

#endif /* SUPERLAB_H */
