#include "mml/mml.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "mml/codelength.hpp"
#include "mml/correlation.hpp"
#include "mml/error.hpp"
#include "mml/mml87_binomial.hpp"
#include "mml/nml.hpp"
#include "mml/simulation.hpp"
#include "mml/smml_binomial.hpp"
#include "mml/ttest.hpp"

#ifndef MML_VERSION_STRING
#define MML_VERSION_STRING "0.0.0"
#endif

struct mml_smml_partition {
  mml::SmmlPartition part;
};

struct mml_sim_config {
  std::string experiment;
  mml::SimConfig cfg;
};

struct mml_risk_table {
  mml::RiskTable table;
};

namespace {

thread_local std::string last_error;

mml_status fail(mml_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs f, translating library exceptions into status codes.
template <class F>
mml_status guarded(F&& f) {
  try {
    f();
    return MML_OK;
  } catch (const mml::ConvergenceError& e) {
    return fail(MML_ERR_CONVERGENCE, e.what());
  } catch (const mml::DegenerateDataError& e) {
    return fail(MML_ERR_DEGENERATE_DATA, e.what());
  } catch (const mml::DomainError& e) {
    return fail(MML_ERR_DOMAIN, e.what());
  } catch (const mml::StructuralError& e) {
    return fail(MML_ERR_STRUCTURE, e.what());
  } catch (const mml::NumericalError& e) {
    return fail(MML_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MML_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MML_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MML_ERR_INTERNAL, "unknown error");
  }
}

#define MML_REQUIRE(ptr)                                                     \
  do {                                                                       \
    if ((ptr) == nullptr) return fail(MML_ERR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

mml_status copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf == nullptr && cap == 0) return MML_OK;
  if (buf == nullptr) return fail(MML_ERR_NULL_ARGUMENT, "buf is null");
  if (cap < s.size() + 1) return fail(MML_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  return MML_OK;
}

mml_biv_normal to_c(const mml::BivNormalParams& p) { return {p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho}; }
mml::BivNormalParams from_c(const mml_biv_normal& p) { return {p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho}; }
mml_hypothesis to_c(mml::Hypothesis h) { return h == mml::Hypothesis::Alternative ? MML_H1 : MML_H0; }

}  // namespace

extern "C" {

const char* mml_version(void) { return MML_VERSION_STRING; }

const char* mml_last_error(void) { return last_error.c_str(); }

const char* mml_status_name(mml_status status) {
  switch (status) {
    case MML_OK: return "ok";
    case MML_ERR_NULL_ARGUMENT: return "null argument";
    case MML_ERR_DOMAIN: return "domain error";
    case MML_ERR_DEGENERATE_DATA: return "degenerate data";
    case MML_ERR_STRUCTURE: return "structural error";
    case MML_ERR_NUMERICAL: return "numerical error";
    case MML_ERR_CONVERGENCE: return "convergence error";
    case MML_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case MML_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

mml_status mml_kappa(int p, double* out) {
  MML_REQUIRE(out);
  return guarded([&] { *out = mml::kappa(p); });
}

mml_status mml_log_kappa(int p, double* out) {
  MML_REQUIRE(out);
  return guarded([&] { *out = mml::log_kappa(p); });
}

mml_status mml_mml87_codelength(double prior_density, double fisher_det, double neg_log_likelihood, int p,
                                double* out_nats) {
  MML_REQUIRE(out_nats);
  return guarded([&] {
    *out_nats = mml::mml87_codelength({prior_density, fisher_det, neg_log_likelihood, p}).nats;
  });
}

mml_status mml_uncertainty_volume(double fisher_det, int p, double* out) {
  MML_REQUIRE(out);
  return guarded([&] { *out = mml::uncertainty_volume(fisher_det, p); });
}

mml_status mml_decide(double i0_nats, double i1_nats, double threshold_nats, mml_hypothesis* out) {
  MML_REQUIRE(out);
  return guarded([&] { *out = to_c(mml::decide(mml::Codelength{i0_nats}, mml::Codelength{i1_nats}, threshold_nats)); });
}

mml_status mml_smml_solve(int n, mml_smml_partition** out) {
  MML_REQUIRE(out);
  return guarded([&] { *out = new mml_smml_partition{mml::solve_smml(n)}; });
}

mml_status mml_smml_evaluate(int n, const int* lo, const int* hi, size_t count, mml_smml_partition** out) {
  MML_REQUIRE(out);
  if (count > 0) {
    MML_REQUIRE(lo);
    MML_REQUIRE(hi);
  }
  return guarded([&] {
    std::vector<mml::Segment> segs(count);
    for (size_t i = 0; i < count; ++i) segs[i] = {lo[i], hi[i]};
    *out = new mml_smml_partition{mml::partition_codelength(segs, n)};
  });
}

void mml_smml_free(mml_smml_partition* partition) { delete partition; }

mml_status mml_smml_n(const mml_smml_partition* partition, int* out) {
  MML_REQUIRE(partition);
  MML_REQUIRE(out);
  *out = partition->part.n;
  return MML_OK;
}

mml_status mml_smml_segment_count(const mml_smml_partition* partition, size_t* out) {
  MML_REQUIRE(partition);
  MML_REQUIRE(out);
  *out = partition->part.segments.size();
  return MML_OK;
}

mml_status mml_smml_segment(const mml_smml_partition* partition, size_t index, int* lo, int* hi, double* estimate,
                            double* mass) {
  MML_REQUIRE(partition);
  const auto& p = partition->part;
  if (index >= p.segments.size()) return fail(MML_ERR_DOMAIN, "segment index out of range");
  if (lo) *lo = p.segments[index].lo;
  if (hi) *hi = p.segments[index].hi;
  if (estimate) *estimate = p.estimates[index];
  if (mass) *mass = p.masses[index];
  return MML_OK;
}

mml_status mml_smml_expected_codelength(const mml_smml_partition* partition, double* out_nats) {
  MML_REQUIRE(partition);
  MML_REQUIRE(out_nats);
  *out_nats = partition->part.expected_codelength.nats;
  return MML_OK;
}

mml_status mml_smml_estimate(const mml_smml_partition* partition, int y, double* out) {
  MML_REQUIRE(partition);
  MML_REQUIRE(out);
  return guarded([&] { *out = mml::smml_estimate({partition->part.n, y}, partition->part); });
}

mml_status mml_smml_message_length(const mml_smml_partition* partition, int y, double* out_nats) {
  MML_REQUIRE(partition);
  MML_REQUIRE(out_nats);
  return guarded([&] { *out_nats = mml::smml_message_length({partition->part.n, y}, partition->part).nats; });
}

mml_status mml_smml_segments_string(const mml_smml_partition* partition, char* buf, size_t cap, size_t* needed) {
  MML_REQUIRE(partition);
  return copy_string(partition->part.segments_string(), buf, cap, needed);
}

mml_status mml_smml_estimates_string(const mml_smml_partition* partition, int decimals, char* buf, size_t cap,
                                     size_t* needed) {
  MML_REQUIRE(partition);
  if (decimals < 0 || decimals > 17) return fail(MML_ERR_DOMAIN, "decimals must lie in 0..17");
  return copy_string(partition->part.estimates_string(decimals), buf, cap, needed);
}

mml_status mml_mml87_binomial_estimate(int n, int y, double* out) {
  MML_REQUIRE(out);
  return guarded([&] {
    mml::validate(mml::BinomialObservation{n, y});
    *out = mml::mml87_binomial_estimate({n, y});
  });
}

mml_status mml_mml87_binomial_codelength(int n, int y, double theta, double* out_nats) {
  MML_REQUIRE(out_nats);
  return guarded([&] { *out_nats = mml::mml87_binomial_codelength({n, y}, theta).nats; });
}

mml_status mml_expected_mml87_codelength(int n, double* out_nats) {
  MML_REQUIRE(out_nats);
  return guarded([&] { *out_nats = mml::expected_mml87_codelength(n).nats; });
}

mml_status mml_nml_binomial(int n, int y, double* fit_nats, double* log_complexity_nats, double* total_nats) {
  return guarded([&] {
    const auto r = mml::nml_binomial_codelength({n, y});
    if (fit_nats) *fit_nats = r.fit_nats;
    if (log_complexity_nats) *log_complexity_nats = r.log_complexity_nats;
    if (total_nats) *total_nats = r.total.nats;
  });
}

mml_status mml_multinomial_complexity(int k, int n, double* out) {
  MML_REQUIRE(out);
  return guarded([&] { *out = mml::multinomial_complexity(k, n); });
}

void mml_ttest_default_options(mml_ttest_options* opts) {
  if (opts == nullptr) return;
  const mml::TTestOptions d;
  *opts = mml_ttest_options{d.prior.df,         d.prior.location, d.prior.scale, d.range.log_omega,
                            d.threshold_nats,   d.with_bayes_factor ? 1 : 0};
}

mml_status mml_ttest(const double* y1, size_t n1, const double* y2, size_t n2, const mml_ttest_options* opts,
                     mml_ttest_result* out) {
  MML_REQUIRE(out);
  if (n1 > 0) MML_REQUIRE(y1);
  if (n2 > 0) MML_REQUIRE(y2);
  return guarded([&] {
    mml::TwoSampleData data{std::vector<double>(y1, y1 + n1), std::vector<double>(y2, y2 + n2)};
    mml::TTestOptions o;
    if (opts) {
      o.prior = {opts->prior_df, opts->prior_location, opts->prior_scale};
      o.range.log_omega = opts->log_omega;
      o.threshold_nats = opts->threshold_nats;
      o.with_bayes_factor = opts->with_bayes_factor != 0;
    }
    if (!(o.prior.df > 0.0) || !(o.prior.scale > 0.0))
      throw mml::DomainError("effect-size prior needs positive df and scale");
    const auto rep = mml::ttest(data, o);
    mml_ttest_result r{};
    r.n1 = rep.stats.n1;
    r.n2 = rep.stats.n2;
    r.nu = rep.stats.nu;
    r.mean1 = rep.stats.mean1;
    r.mean2 = rep.stats.mean2;
    r.pooled_sd = rep.stats.pooled_sd;
    r.t = rep.stats.t;
    r.n_delta = rep.stats.n_delta;
    r.null_mu = rep.null_params.mu;
    r.null_sigma = rep.null_params.sigma;
    r.alt_mu = rep.alt_params.mu;
    r.alt_sigma = rep.alt_params.sigma;
    r.alt_delta = rep.alt_params.delta;
    r.ml_mu = rep.ml_params.mu;
    r.ml_sigma = rep.ml_params.sigma;
    r.ml_delta = rep.ml_params.delta;
    r.i0_nats = rep.result.null_codelength.nats;
    r.i1_nats = rep.result.alt_codelength.nats;
    r.difference_nats = rep.result.difference_nats;
    r.selected = to_c(rep.result.selected);
    r.has_bayes_factor = rep.result.bayes_factor.has_value();
    r.bayes_factor = rep.result.bayes_factor.value_or(0.0);
    *out = r;
  });
}

mml_status mml_corr_test(const double* y1, const double* y2, size_t n, double rho0, double log_omega,
                         double threshold_nats, mml_corr_result* out) {
  MML_REQUIRE(out);
  if (n > 0) {
    MML_REQUIRE(y1);
    MML_REQUIRE(y2);
  }
  return guarded([&] {
    mml::BivariateSample data{std::vector<double>(y1, y1 + n), std::vector<double>(y2, y2 + n)};
    const auto rep = mml::corr_test(data, rho0, mml::PriorRange{log_omega}, threshold_nats);
    mml_corr_result r{};
    r.n = rep.stats.n;
    r.mean1 = rep.stats.mean1;
    r.mean2 = rep.stats.mean2;
    r.s1_sq = rep.stats.s1_sq;
    r.s2_sq = rep.stats.s2_sq;
    r.r = rep.stats.r;
    r.null_params = to_c(rep.null_params);
    r.alt_params = to_c(rep.alt_params);
    r.olkin_pratt = rep.olkin_pratt;
    r.i0_nats = rep.result.null_codelength.nats;
    r.i1_nats = rep.result.alt_codelength.nats;
    r.difference_nats = rep.result.difference_nats;
    r.selected = to_c(rep.result.selected);
    *out = r;
  });
}

mml_status mml_mml_rho(double r, int n, double* out) {
  MML_REQUIRE(out);
  if (!(std::abs(r) <= 1.0) || n < 3) return fail(MML_ERR_DOMAIN, "mml_rho: need |r| <= 1 and n >= 3");
  *out = mml::mml_rho(r, n);
  return MML_OK;
}

mml_status mml_olkin_pratt(double r, int n, double* out) {
  MML_REQUIRE(out);
  return guarded([&] { *out = mml::olkin_pratt(r, n); });
}

mml_status mml_kl_bivariate_normal(const mml_biv_normal* truth, const mml_biv_normal* est, double* out) {
  MML_REQUIRE(truth);
  MML_REQUIRE(est);
  MML_REQUIRE(out);
  return guarded([&] { *out = mml::kl_bivariate_normal(from_c(*truth), from_c(*est)); });
}

mml_status mml_sim_config_new(const char* experiment, mml_sim_config** out) {
  MML_REQUIRE(experiment);
  MML_REQUIRE(out);
  return guarded([&] { *out = new mml_sim_config{experiment, mml::default_sim_config(experiment)}; });
}

void mml_sim_config_free(mml_sim_config* cfg) { delete cfg; }

mml_status mml_sim_config_set_seed(mml_sim_config* cfg, uint64_t seed) {
  MML_REQUIRE(cfg);
  cfg->cfg.seed = seed;
  return MML_OK;
}

mml_status mml_sim_config_set_replicates(mml_sim_config* cfg, int replicates) {
  MML_REQUIRE(cfg);
  if (replicates < 1) return fail(MML_ERR_DOMAIN, "replicates must be at least 1");
  cfg->cfg.replicates = replicates;
  return MML_OK;
}

mml_status mml_sim_config_set_grid(mml_sim_config* cfg, const double* values, size_t count) {
  MML_REQUIRE(cfg);
  if (count == 0) return fail(MML_ERR_DOMAIN, "grid must not be empty");
  MML_REQUIRE(values);
  cfg->cfg.grid.assign(values, values + count);
  return MML_OK;
}

mml_status mml_sim_config_set_null_grid(mml_sim_config* cfg, const double* values, size_t count) {
  MML_REQUIRE(cfg);
  if (count == 0) return fail(MML_ERR_DOMAIN, "null grid must not be empty");
  MML_REQUIRE(values);
  cfg->cfg.null_grid.assign(values, values + count);
  return MML_OK;
}

mml_status mml_sim_config_set_n_values(mml_sim_config* cfg, const int* values, size_t count) {
  MML_REQUIRE(cfg);
  if (count == 0) return fail(MML_ERR_DOMAIN, "sample sizes must not be empty");
  MML_REQUIRE(values);
  cfg->cfg.n_values.assign(values, values + count);
  return MML_OK;
}

mml_status mml_sim_config_set_threshold(mml_sim_config* cfg, double threshold_nats) {
  MML_REQUIRE(cfg);
  if (!(threshold_nats >= 0.0)) return fail(MML_ERR_DOMAIN, "threshold must be non-negative");
  cfg->cfg.threshold_nats = threshold_nats;
  return MML_OK;
}

mml_status mml_sim_config_set_prior(mml_sim_config* cfg, double df, double location, double scale) {
  MML_REQUIRE(cfg);
  if (!(df > 0.0) || !(scale > 0.0) || !std::isfinite(location))
    return fail(MML_ERR_DOMAIN, "prior needs positive df and scale and a finite location");
  cfg->cfg.prior = {df, location, scale};
  return MML_OK;
}

mml_status mml_sim_config_set_bayes_factor(mml_sim_config* cfg, int enabled) {
  MML_REQUIRE(cfg);
  cfg->cfg.with_bayes_factor = enabled != 0;
  return MML_OK;
}

mml_status mml_sim_config_set_threads(mml_sim_config* cfg, unsigned threads) {
  MML_REQUIRE(cfg);
  cfg->cfg.threads = threads == 0 ? 1 : threads;
  return MML_OK;
}

mml_status mml_sim_run(const mml_sim_config* cfg, mml_risk_table** out) {
  MML_REQUIRE(cfg);
  MML_REQUIRE(out);
  return guarded([&] { *out = new mml_risk_table{mml::run_experiment(cfg->experiment, cfg->cfg)}; });
}

void mml_risk_table_free(mml_risk_table* table) { delete table; }

mml_status mml_risk_table_row_count(const mml_risk_table* table, size_t* out) {
  MML_REQUIRE(table);
  MML_REQUIRE(out);
  *out = table->table.rows.size();
  return MML_OK;
}

mml_status mml_risk_table_row(const mml_risk_table* table, size_t index, const char** name, int* n,
                              const char** parameter, double* value, double* stderr_value, int* replicates) {
  MML_REQUIRE(table);
  if (index >= table->table.rows.size()) return fail(MML_ERR_DOMAIN, "row index out of range");
  const auto& row = table->table.rows[index];
  if (name) *name = row.name.c_str();
  if (n) *n = row.n;
  if (parameter) *parameter = row.parameter.c_str();
  if (value) *value = row.value;
  if (stderr_value) *stderr_value = row.stderr_;
  if (replicates) *replicates = row.replicates;
  return MML_OK;
}

mml_status mml_risk_table_counts(const mml_risk_table* table, long* redraws, long* nonconverged) {
  MML_REQUIRE(table);
  if (redraws) *redraws = table->table.redraws;
  if (nonconverged) *nonconverged = table->table.nonconverged;
  return MML_OK;
}

mml_status mml_risk_table_csv(const mml_risk_table* table, char* buf, size_t cap, size_t* needed) {
  MML_REQUIRE(table);
  return copy_string(mml::to_csv(table->table), buf, cap, needed);
}

}  // extern "C"
