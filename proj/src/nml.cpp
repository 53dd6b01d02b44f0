#include "mml/nml.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mml/error.hpp"
#include "mml/special.hpp"

namespace mml {

namespace {

// log of the maximised binomial likelihood C(n,x) (x/n)^x ((n-x)/n)^(n-x).
double log_max_likelihood(int n, int x) {
  const double dn = n;
  return log_binomial(n, x) + xlogy(x, x / dn) + xlogy(n - x, (n - x) / dn);
}

}  // namespace

double binomial_complexity(int n) {
  if (n < 1) throw DomainError("binomial_complexity: n must be at least 1");
  double sum = 0.0;
  for (int x = 0; x <= n; ++x) sum += std::exp(log_max_likelihood(n, x));
  return sum;
}

double multinomial_complexity(int k, int n) {
  if (k < 1) throw DomainError("multinomial_complexity: k must be at least 1");
  if (n < 1) throw DomainError("multinomial_complexity: n must be at least 1");
  double prev = 1.0;  // C_1
  if (k == 1) return prev;
  double cur = binomial_complexity(n);  // C_2
  for (int j = 3; j <= k; ++j) {
    const double next = cur + (static_cast<double>(n) / (j - 2)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

NmlResult nml_binomial_codelength(const BinomialObservation& obs) {
  validate(obs);
  NmlResult r;
  r.fit_nats = -log_max_likelihood(obs.n, obs.y);
  r.log_complexity_nats = std::log(binomial_complexity(obs.n));
  r.total = Codelength{r.fit_nats + r.log_complexity_nats};
  return r;
}

double nml_asymptotic_binomial(int n) {
  if (n < 1) throw DomainError("nml_asymptotic_binomial: n must be at least 1");
  // integral of sqrt(1/(t(1-t))) over (0,1) is pi
  return 0.5 * std::log(n / (2.0 * std::numbers::pi)) + std::log(std::numbers::pi);
}

}  // namespace mml
