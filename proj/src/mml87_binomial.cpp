#include "mml/mml87_binomial.hpp"

#include <cmath>

#include "mml/error.hpp"
#include "mml/special.hpp"

namespace mml {

Codelength mml87_binomial_codelength(const BinomialObservation& obs, double theta) {
  validate(obs);
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("mml87_binomial_codelength: theta must lie in (0, 1)");
  const double n = obs.n;
  const double y = obs.y;
  const double log_choose = log_binomial(obs.n, obs.y);
  // -(y+1/2) log t - (n-y+1/2) log(1-t) + 1/2 (1 + log(n / (12 C(n,y)^2)))
  return Codelength{-(y + 0.5) * std::log(theta) - (n - y + 0.5) * std::log1p(-theta) +
                    0.5 * (1.0 + std::log(n / 12.0) - 2.0 * log_choose)};
}

double mml87_binomial_estimate(const BinomialObservation& obs) {
  validate(obs);
  return (obs.y + 0.5) / (obs.n + 1.0);
}

Codelength expected_mml87_codelength(int n) {
  const double r = marginal(n);
  double total = 0.0;
  for (int y = 0; y <= n; ++y) {
    const BinomialObservation obs{n, y};
    total += r * mml87_binomial_codelength(obs, mml87_binomial_estimate(obs)).nats;
  }
  return Codelength{total};
}

}  // namespace mml
