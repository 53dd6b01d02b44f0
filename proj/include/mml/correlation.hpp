#pragma once

#include <utility>
#include <vector>

#include "mml/codelength.hpp"

namespace mml {

struct BivariateSample {
  std::vector<double> y1;
  std::vector<double> y2;
};

/// Means, divide-by-n variances and the sample correlation.
struct CorrSufficientStats {
  int n = 0;
  double mean1 = 0.0;
  double mean2 = 0.0;
  double s1_sq = 0.0;
  double s2_sq = 0.0;
  double r = 0.0;
};

struct BivNormalParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho = 0.0;
};

/// Throws DegenerateDataError for n < 3, unequal lengths or a zero marginal variance.
CorrSufficientStats corr_stats(const BivariateSample& data);

/// -log likelihood of the sample under a bivariate normal.
double biv_neg_log_likelihood(const CorrSufficientStats& st, const BivNormalParams& params);

/// Null (rho fixed at params.rho) codelength at an arbitrary point, p = 4.
Codelength corr_null_codelength_at(const CorrSufficientStats& st, const BivNormalParams& params,
                                   PriorRange range = {});

/// Minimum null codelength and its MML estimates. |rho0| >= 1 throws DomainError.
std::pair<Codelength, BivNormalParams> corr_null_codelength(const BivariateSample& data, double rho0,
                                                            PriorRange range = {});
std::pair<Codelength, BivNormalParams> corr_null_codelength(const CorrSufficientStats& st, double rho0,
                                                            PriorRange range = {});

BivNormalParams corr_ml_null_estimates(const CorrSufficientStats& st, double rho0);
BivNormalParams corr_ml_null_estimates(const BivariateSample& data, double rho0);

/// Alternative codelength, p = 5, with a uniform prior of density 1/2 on rho.
Codelength corr_alt_codelength(const CorrSufficientStats& st, const BivNormalParams& params, PriorRange range = {});
Codelength corr_alt_codelength(const BivariateSample& data, const BivNormalParams& params, PriorRange range = {});

/// Closed-form minimiser of the alternative codelength.
BivNormalParams corr_mml_alt_estimates(const CorrSufficientStats& st);
BivNormalParams corr_mml_alt_estimates(const BivariateSample& data);

/// The MML correlation estimate alone, as a function of r and n.
double mml_rho(double r, int n);

/// Unbiased estimate r * 2F1(1/2, 1/2; (n-1)/2; 1 - r^2); requires n >= 5.
double olkin_pratt(double r, int n);

/// KL(truth || est) in nats for two bivariate normals. Throws DomainError if
/// either covariance is singular.
double kl_bivariate_normal(const BivNormalParams& truth, const BivNormalParams& est);

struct CorrTestReport {
  CorrSufficientStats stats;
  BivNormalParams null_params;
  BivNormalParams alt_params;
  double olkin_pratt = 0.0;
  HypothesisResult result;
};

CorrTestReport corr_test(const BivariateSample& data, double rho0, PriorRange range = {}, double threshold_nats = 0.0);
CorrTestReport corr_test(const CorrSufficientStats& st, double rho0, PriorRange range = {},
                         double threshold_nats = 0.0);

}  // namespace mml
