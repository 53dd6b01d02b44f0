#pragma once

#include "mml/codelength.hpp"
#include "mml/smml_binomial.hpp"

namespace mml {

/// Normalised maximum likelihood codelength, split into its two terms.
struct NmlResult {
  double fit_nats = 0.0;             // -log max_theta p(y | theta)
  double log_complexity_nats = 0.0;  // log C(n)
  Codelength total;
};

/// Parametric complexity C(n) = sum_x C(n,x) (x/n)^x ((n-x)/n)^(n-x), 0^0 = 1.
double binomial_complexity(int n);

/// Parametric complexity of the K-category multinomial, by the linear
/// recurrence C_K = C_{K-1} + n/(K-2) C_{K-2} from C_1 = 1 and C_2 =
/// binomial_complexity(n).
double multinomial_complexity(int k, int n);

NmlResult nml_binomial_codelength(const BinomialObservation& obs);

/// Rissanen's asymptotic log-complexity for the binomial:
/// 1/2 log(n / 2 pi) + log pi (nats).
double nml_asymptotic_binomial(int n);

}  // namespace mml
