#pragma once

#include "mml/codelength.hpp"
#include "mml/smml_binomial.hpp"

namespace mml {

/// MML87 codelength of y | n at success probability theta, uniform prior.
/// theta must lie strictly inside (0, 1).
Codelength mml87_binomial_codelength(const BinomialObservation& obs, double theta);

/// The minimiser (y + 1/2) / (n + 1).
double mml87_binomial_estimate(const BinomialObservation& obs);

/// Expected MML87 codelength at the estimate, averaged over the marginal
/// r(y) = 1/(n+1).
Codelength expected_mml87_codelength(int n);

}  // namespace mml
