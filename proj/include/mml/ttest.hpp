#pragma once

#include <utility>
#include <vector>

#include "mml/codelength.hpp"

namespace mml {

/// Observations from two groups assumed to share a common variance.
struct TwoSampleData {
  std::vector<double> y1;
  std::vector<double> y2;
};

struct TTestSufficientStats {
  int n1 = 0;
  int n2 = 0;
  double mean1 = 0.0;
  double mean2 = 0.0;
  double s1_sq = 0.0;  // unbiased
  double s2_sq = 0.0;
  double pooled_sd = 0.0;  // s_p, with s_p^2 = ((n1-1) s1^2 + (n2-1) s2^2) / nu
  double t = 0.0;
  int nu = 0;
  double n_delta = 0.0;  // (1/n1 + 1/n2)^-1
  double sum1 = 0.0;     // S_1
  double sum2 = 0.0;     // S_2
  double sum_sq = 0.0;   // S^2 = y'y over both groups
};

/// Parameters of the common-mean model (delta = 0).
struct NullParams {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Group means are mu +/- sigma * delta / 2.
struct AltParams {
  double mu = 0.0;
  double sigma = 1.0;
  double delta = 0.0;
};

/// Location-scale Student-t prior on the standardised effect size. The
/// default is a standard Cauchy.
struct EffectSizePrior {
  double df = 1.0;
  double location = 0.0;
  double scale = 1.0;
};

/// Throws DegenerateDataError unless n1, n2 >= 2 and the pooled variance is positive.
TTestSufficientStats ttest_stats(const TwoSampleData& data);

/// Negative log-likelihood of the stacked data under N(mu, sigma^2).
double null_neg_log_likelihood(const TwoSampleData& data, const NullParams& params);

/// MML87 codelength of the null model at an arbitrary parameter point.
Codelength null_codelength_at(const TwoSampleData& data, const NullParams& params, PriorRange range = {});

/// Minimum null codelength and its minimiser (grand mean, unbiased variance
/// of the stacked data).
std::pair<Codelength, NullParams> null_codelength(const TwoSampleData& data, PriorRange range = {});

double alt_neg_log_likelihood(const TwoSampleData& data, const AltParams& params);

/// Maximum likelihood estimates under the alternative.
AltParams ml_alt_estimates(const TwoSampleData& data);

/// MML87 codelength of the alternative: Haar prior on (mu, sigma), Student-t
/// prior on delta, |J| = 2 n1 n2 (n1 + n2) / sigma^4, p = 3.
Codelength alt_codelength(const TwoSampleData& data, const AltParams& params, const EffectSizePrior& prior,
                          PriorRange range = {});

struct AltFit {
  Codelength codelength;
  AltParams params;
  double gradient_norm = 0.0;  // in standardised coordinates
  int iterations = 0;
};

/// Numerical minimiser of alt_codelength over (mu, sigma, delta). Starts a
/// simplex search at the ML estimates and at the prior location for delta,
/// then polishes with Newton steps. Throws ConvergenceError (carrying the best
/// point found, as {mu, sigma, delta}) if the gradient norm stays above 1e-6.
AltFit fit_alt(const TwoSampleData& data, const EffectSizePrior& prior = {}, PriorRange range = {});

/// BF_10 = int T_nu(t | sqrt(n_delta) delta) pi(delta) d delta / T_nu(t),
/// by adaptive Gauss-Kronrod quadrature. Throws NumericalError if the
/// quadrature misses its 1e-8 relative error target.
double bayes_factor(const TwoSampleData& data, const EffectSizePrior& prior = {});

struct TTestOptions {
  EffectSizePrior prior;
  PriorRange range;
  double threshold_nats = 0.0;
  bool with_bayes_factor = false;
};

struct TTestReport {
  TTestSufficientStats stats;
  NullParams null_params;
  AltParams alt_params;
  AltParams ml_params;
  HypothesisResult result;
};

/// Full test: both codelengths, the decision, and optionally BF_10.
TTestReport ttest(const TwoSampleData& data, const TTestOptions& opts = {});

}  // namespace mml
