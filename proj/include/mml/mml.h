/* C interface to the mml inference library.
 *
 * Every function returns an mml_status. On failure the output arguments are
 * left untouched and mml_last_error() describes the problem; the message is
 * thread-local and valid until the next failing call on the same thread.
 * Objects behind opaque handles are released with their matching _free call.
 * Codelengths cross this interface in nats.
 */
#ifndef MML_MML_H
#define MML_MML_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MML_API __declspec(dllexport)
#else
#define MML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mml_status {
  MML_OK = 0,
  MML_ERR_NULL_ARGUMENT = 1,
  MML_ERR_DOMAIN = 2,
  MML_ERR_DEGENERATE_DATA = 3,
  MML_ERR_STRUCTURE = 4,
  MML_ERR_NUMERICAL = 5,
  MML_ERR_CONVERGENCE = 6,
  MML_ERR_BUFFER_TOO_SMALL = 7,
  MML_ERR_INTERNAL = 8
} mml_status;

typedef enum mml_hypothesis { MML_H0 = 0, MML_H1 = 1 } mml_hypothesis;

MML_API const char* mml_version(void);
MML_API const char* mml_last_error(void);
MML_API const char* mml_status_name(mml_status status);

/* ---- codelength core ---- */

MML_API mml_status mml_kappa(int p, double* out);
MML_API mml_status mml_log_kappa(int p, double* out);
MML_API mml_status mml_mml87_codelength(double prior_density, double fisher_det, double neg_log_likelihood, int p,
                                        double* out_nats);
MML_API mml_status mml_uncertainty_volume(double fisher_det, int p, double* out);
/* Selects H1 iff i1 + threshold < i0. */
MML_API mml_status mml_decide(double i0_nats, double i1_nats, double threshold_nats, mml_hypothesis* out);

/* ---- binomial: strict MML ---- */

typedef struct mml_smml_partition mml_smml_partition;

MML_API mml_status mml_smml_solve(int n, mml_smml_partition** out);
/* Evaluates a given cover of {0..n}; segment j is lo[j]..hi[j]. */
MML_API mml_status mml_smml_evaluate(int n, const int* lo, const int* hi, size_t count, mml_smml_partition** out);
MML_API void mml_smml_free(mml_smml_partition* partition);
MML_API mml_status mml_smml_n(const mml_smml_partition* partition, int* out);
MML_API mml_status mml_smml_segment_count(const mml_smml_partition* partition, size_t* out);
MML_API mml_status mml_smml_segment(const mml_smml_partition* partition, size_t index, int* lo, int* hi,
                                    double* estimate, double* mass);
MML_API mml_status mml_smml_expected_codelength(const mml_smml_partition* partition, double* out_nats);
/* Estimate assigned to outcome y. */
MML_API mml_status mml_smml_estimate(const mml_smml_partition* partition, int y, double* out);
/* Two-part message length of outcome y: -log q - log p(y | estimate). */
MML_API mml_status mml_smml_message_length(const mml_smml_partition* partition, int y, double* out_nats);
/* "{0..0, 1..4}" and "{0.000, 0.250}". Writes at most cap bytes including the
 * terminator; *needed (if non-null) receives the full length plus one. */
MML_API mml_status mml_smml_segments_string(const mml_smml_partition* partition, char* buf, size_t cap,
                                            size_t* needed);
MML_API mml_status mml_smml_estimates_string(const mml_smml_partition* partition, int decimals, char* buf,
                                             size_t cap, size_t* needed);

/* ---- binomial: MML87 and NML ---- */

MML_API mml_status mml_mml87_binomial_estimate(int n, int y, double* out);
MML_API mml_status mml_mml87_binomial_codelength(int n, int y, double theta, double* out_nats);
MML_API mml_status mml_expected_mml87_codelength(int n, double* out_nats);
MML_API mml_status mml_nml_binomial(int n, int y, double* fit_nats, double* log_complexity_nats, double* total_nats);
MML_API mml_status mml_multinomial_complexity(int k, int n, double* out);

/* ---- two-sample t-test ---- */

typedef struct mml_ttest_options {
  double prior_df;       /* Student-t prior on the effect size */
  double prior_location;
  double prior_scale;
  double log_omega;      /* normaliser of the scale-invariant prior */
  double threshold_nats;
  int with_bayes_factor;
} mml_ttest_options;

typedef struct mml_ttest_result {
  int n1, n2, nu;
  double mean1, mean2, pooled_sd, t, n_delta;
  double null_mu, null_sigma;
  double alt_mu, alt_sigma, alt_delta;
  double ml_mu, ml_sigma, ml_delta;
  double i0_nats, i1_nats, difference_nats;
  mml_hypothesis selected;
  int has_bayes_factor;
  double bayes_factor;
} mml_ttest_result;

MML_API void mml_ttest_default_options(mml_ttest_options* opts);
MML_API mml_status mml_ttest(const double* y1, size_t n1, const double* y2, size_t n2, const mml_ttest_options* opts,
                             mml_ttest_result* out);

/* ---- correlation ---- */

typedef struct mml_biv_normal {
  double mu1, mu2, sigma1, sigma2, rho;
} mml_biv_normal;

typedef struct mml_corr_result {
  int n;
  double mean1, mean2, s1_sq, s2_sq, r;
  mml_biv_normal null_params;
  mml_biv_normal alt_params;
  double olkin_pratt; /* NaN when n < 5 */
  double i0_nats, i1_nats, difference_nats;
  mml_hypothesis selected;
} mml_corr_result;

MML_API mml_status mml_corr_test(const double* y1, const double* y2, size_t n, double rho0, double log_omega,
                                 double threshold_nats, mml_corr_result* out);
MML_API mml_status mml_mml_rho(double r, int n, double* out);
MML_API mml_status mml_olkin_pratt(double r, int n, double* out);
MML_API mml_status mml_kl_bivariate_normal(const mml_biv_normal* truth, const mml_biv_normal* est, double* out);

/* ---- Monte Carlo experiments ---- */

typedef struct mml_sim_config mml_sim_config;
typedef struct mml_risk_table mml_risk_table;

/* Default desk-scale configuration for "delta-nmse", "rho-mse", "type1" or "corr-table". */
MML_API mml_status mml_sim_config_new(const char* experiment, mml_sim_config** out);
MML_API void mml_sim_config_free(mml_sim_config* cfg);
MML_API mml_status mml_sim_config_set_seed(mml_sim_config* cfg, uint64_t seed);
MML_API mml_status mml_sim_config_set_replicates(mml_sim_config* cfg, int replicates);
MML_API mml_status mml_sim_config_set_grid(mml_sim_config* cfg, const double* values, size_t count);
MML_API mml_status mml_sim_config_set_null_grid(mml_sim_config* cfg, const double* values, size_t count);
MML_API mml_status mml_sim_config_set_n_values(mml_sim_config* cfg, const int* values, size_t count);
MML_API mml_status mml_sim_config_set_threshold(mml_sim_config* cfg, double threshold_nats);
MML_API mml_status mml_sim_config_set_prior(mml_sim_config* cfg, double df, double location, double scale);
MML_API mml_status mml_sim_config_set_bayes_factor(mml_sim_config* cfg, int enabled);
MML_API mml_status mml_sim_config_set_threads(mml_sim_config* cfg, unsigned threads);

MML_API mml_status mml_sim_run(const mml_sim_config* cfg, mml_risk_table** out);
MML_API void mml_risk_table_free(mml_risk_table* table);
MML_API mml_status mml_risk_table_row_count(const mml_risk_table* table, size_t* out);
/* String outputs point into the table and live as long as it does. */
MML_API mml_status mml_risk_table_row(const mml_risk_table* table, size_t index, const char** name, int* n,
                                      const char** parameter, double* value, double* stderr_value, int* replicates);
MML_API mml_status mml_risk_table_counts(const mml_risk_table* table, long* redraws, long* nonconverged);
MML_API mml_status mml_risk_table_csv(const mml_risk_table* table, char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
