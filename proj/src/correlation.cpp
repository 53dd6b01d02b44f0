#include "mml/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mml/error.hpp"
#include "mml/special.hpp"

namespace mml {

namespace {

void check_rho(double rho, const char* what) {
  if (!(std::abs(rho) < 1.0)) throw DomainError(std::string(what) + ": |rho| must be below 1");
}

void check_params(const BivNormalParams& p) {
  if (!(p.sigma1 > 0.0) || !(p.sigma2 > 0.0)) throw DomainError("bivariate normal: sigmas must be positive");
  check_rho(p.rho, "bivariate normal");
}

// Sum over observations of the quadratic form Q_i.
double q_sum(const CorrSufficientStats& st, const BivNormalParams& p) {
  const double n = st.n;
  const double d1 = (st.mean1 - p.mu1) / p.sigma1;
  const double d2 = (st.mean2 - p.mu2) / p.sigma2;
  const double a = st.s1_sq / (p.sigma1 * p.sigma1);
  const double b = st.s2_sq / (p.sigma2 * p.sigma2);
  const double c = st.r * std::sqrt(st.s1_sq * st.s2_sq) / (p.sigma1 * p.sigma2);
  return n * (a - 2.0 * p.rho * c + b) + n * (d1 * d1 - 2.0 * p.rho * d1 * d2 + d2 * d2);
}

BivNormalParams scaled(const CorrSufficientStats& st, double factor, double rho) {
  return BivNormalParams{st.mean1, st.mean2, std::sqrt(st.s1_sq * factor), std::sqrt(st.s2_sq * factor), rho};
}

}  // namespace

CorrSufficientStats corr_stats(const BivariateSample& data) {
  if (data.y1.size() != data.y2.size()) throw DegenerateDataError("correlation: columns differ in length");
  if (data.y1.size() < 3) throw DegenerateDataError("correlation: need at least three pairs");
  CorrSufficientStats st;
  st.n = static_cast<int>(data.y1.size());
  const double n = st.n;
  for (std::size_t i = 0; i < data.y1.size(); ++i) {
    st.mean1 += data.y1[i];
    st.mean2 += data.y2[i];
  }
  st.mean1 /= n;
  st.mean2 /= n;
  double sxy = 0.0;
  for (std::size_t i = 0; i < data.y1.size(); ++i) {
    const double a = data.y1[i] - st.mean1, b = data.y2[i] - st.mean2;
    st.s1_sq += a * a;
    st.s2_sq += b * b;
    sxy += a * b;
  }
  st.s1_sq /= n;
  st.s2_sq /= n;
  if (!(st.s1_sq > 0.0) || !(st.s2_sq > 0.0))
    throw DegenerateDataError("correlation: a marginal sample variance is zero");
  st.r = std::clamp(sxy / (n * std::sqrt(st.s1_sq * st.s2_sq)), -1.0, 1.0);
  return st;
}

double biv_neg_log_likelihood(const CorrSufficientStats& st, const BivNormalParams& p) {
  check_params(p);
  const double n = st.n;
  const double om = 1.0 - p.rho * p.rho;
  return n * std::log(2.0 * std::numbers::pi) + n * std::log(p.sigma1 * p.sigma2) + 0.5 * n * std::log(om) +
         q_sum(st, p) / (2.0 * om);
}

Codelength corr_null_codelength_at(const CorrSufficientStats& st, const BivNormalParams& p, PriorRange range) {
  check_params(p);
  const double n = st.n;
  const double log_s = std::log(p.sigma1 * p.sigma2);
  const double log_prior = -range.log_omega - log_s;
  // 4 n^4 / ((1 - rho0^2)^2 sigma1^4 sigma2^4)
  const double log_fisher = std::log(4.0) + 4.0 * std::log(n) - 2.0 * std::log1p(-p.rho * p.rho) - 4.0 * log_s;
  return mml87_codelength_log(log_prior, log_fisher, biv_neg_log_likelihood(st, p), 4);
}

BivNormalParams corr_ml_null_estimates(const CorrSufficientStats& st, double rho0) {
  check_rho(rho0, "corr_ml_null_estimates");
  return scaled(st, (1.0 - rho0 * st.r) / (1.0 - rho0 * rho0), rho0);
}

BivNormalParams corr_ml_null_estimates(const BivariateSample& data, double rho0) {
  return corr_ml_null_estimates(corr_stats(data), rho0);
}

std::pair<Codelength, BivNormalParams> corr_null_codelength(const CorrSufficientStats& st, double rho0,
                                                            PriorRange range) {
  check_rho(rho0, "corr_null_codelength");
  const double n = st.n;
  const auto est = scaled(st, n * (1.0 - rho0 * st.r) / ((n - 1.0) * (1.0 - rho0 * rho0)), rho0);
  return {corr_null_codelength_at(st, est, range), est};
}

std::pair<Codelength, BivNormalParams> corr_null_codelength(const BivariateSample& data, double rho0,
                                                            PriorRange range) {
  check_rho(rho0, "corr_null_codelength");
  return corr_null_codelength(corr_stats(data), rho0, range);
}

Codelength corr_alt_codelength(const CorrSufficientStats& st, const BivNormalParams& p, PriorRange range) {
  check_params(p);
  const double n = st.n;
  const double log_s = std::log(p.sigma1 * p.sigma2);
  const double log_prior = -range.log_omega - log_s - std::numbers::ln2;
  // 4 n^5 / ((1 - rho^2)^4 sigma1^4 sigma2^4)
  const double log_fisher = std::log(4.0) + 5.0 * std::log(n) - 4.0 * std::log1p(-p.rho * p.rho) - 4.0 * log_s;
  return mml87_codelength_log(log_prior, log_fisher, biv_neg_log_likelihood(st, p), 5);
}

Codelength corr_alt_codelength(const BivariateSample& data, const BivNormalParams& p, PriorRange range) {
  return corr_alt_codelength(corr_stats(data), p, range);
}

double mml_rho(double r, int n) {
  if (std::abs(r) < 1e-10) return 0.0;
  const double dn = n;
  const double disc = (dn + 2.0) * (dn + 2.0) - 12.0 * r * r * (dn - 1.0);
  // Rationalised root: 2 (n-1) r / (n + 2 + sqrt(disc)), free of cancellation.
  return 2.0 * (dn - 1.0) * r / (dn + 2.0 + std::sqrt(disc));
}

BivNormalParams corr_mml_alt_estimates(const CorrSufficientStats& st) {
  const double n = st.n;
  const double rho = mml_rho(st.r, st.n);
  return scaled(st, n * (n - 3.0 * rho * st.r + 2.0) / ((n - 1.0) * (n + 2.0)), rho);
}

BivNormalParams corr_mml_alt_estimates(const BivariateSample& data) { return corr_mml_alt_estimates(corr_stats(data)); }

double olkin_pratt(double r, int n) {
  if (n < 5) throw DomainError("olkin_pratt: n must be at least 5");
  if (!(std::abs(r) <= 1.0)) throw DomainError("olkin_pratt: |r| must not exceed 1");
  if (r == 0.0) return 0.0;
  return r * gauss_2f1(0.5, 0.5, 0.5 * (n - 1), 1.0 - r * r);
}

double kl_bivariate_normal(const BivNormalParams& t, const BivNormalParams& e) {
  if (!(t.sigma1 > 0.0) || !(t.sigma2 > 0.0) || !(e.sigma1 > 0.0) || !(e.sigma2 > 0.0))
    throw DomainError("kl_bivariate_normal: sigmas must be positive");
  const double det_t = 1.0 - t.rho * t.rho;
  const double det_e = 1.0 - e.rho * e.rho;
  if (!(det_t > 1e-14) || !(det_e > 1e-14)) throw DomainError("kl_bivariate_normal: singular covariance");
  // Work with correlation-scaled coordinates of the estimate.
  const double a = t.sigma1 / e.sigma1, b = t.sigma2 / e.sigma2;
  const double trace = (a * a - 2.0 * e.rho * t.rho * a * b + b * b) / det_e;
  const double d1 = (e.mu1 - t.mu1) / e.sigma1, d2 = (e.mu2 - t.mu2) / e.sigma2;
  const double maha = (d1 * d1 - 2.0 * e.rho * d1 * d2 + d2 * d2) / det_e;
  const double logdet = std::log(det_e / det_t) - 2.0 * std::log(a * b);
  return 0.5 * (trace + maha - 2.0 + logdet);
}

CorrTestReport corr_test(const CorrSufficientStats& st, double rho0, PriorRange range, double threshold_nats) {
  check_rho(rho0, "corr_test");
  CorrTestReport rep;
  rep.stats = st;
  auto [i0, null_params] = corr_null_codelength(st, rho0, range);
  rep.null_params = null_params;
  rep.alt_params = corr_mml_alt_estimates(st);
  if (!(std::abs(rep.alt_params.rho) < 1.0)) throw DegenerateDataError("correlation: sample is perfectly collinear");
  const Codelength i1 = corr_alt_codelength(st, rep.alt_params, range);
  rep.olkin_pratt = st.n >= 5 ? olkin_pratt(st.r, st.n) : std::nan("");
  rep.result.null_codelength = i0;
  rep.result.alt_codelength = i1;
  rep.result.difference_nats = posterior_log_odds(i0, i1);
  rep.result.selected = decide(i0, i1, threshold_nats);
  return rep;
}

CorrTestReport corr_test(const BivariateSample& data, double rho0, PriorRange range, double threshold_nats) {
  check_rho(rho0, "corr_test");
  return corr_test(corr_stats(data), rho0, range, threshold_nats);
}

}  // namespace mml
