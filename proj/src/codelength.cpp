#include "mml/codelength.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mml/error.hpp"

namespace mml {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

// No closed forms are known for p = 4, 5; these are the published
// six-decimal values.
constexpr double kKappa4 = 0.076603;
constexpr double kKappa5 = 0.075625;

}  // namespace

double log_kappa(int p) {
  switch (p) {
    case 1:
      return -std::log(12.0);
    case 2:
      return std::log(5.0 / (36.0 * std::sqrt(3.0)));
    case 3:
      return std::log(19.0 / (192.0 * std::cbrt(2.0)));
    case 4:
      return std::log(kKappa4);
    case 5:
      return std::log(kKappa5);
    default:
      break;
  }
  if (p <= 0) throw DomainError("kappa: dimension must be positive, got " + std::to_string(p));
  // (p/2)(log k + 1) ~ -(p/2) log 2pi + 1/2 log(p pi) - gamma
  const double dp = p;
  return -std::log(2.0 * std::numbers::pi) + (std::log(dp * std::numbers::pi) - 2.0 * kEulerGamma) / dp - 1.0;
}

double kappa(int p) {
  switch (p) {
    case 1:
      return 1.0 / 12.0;
    case 2:
      return 5.0 / (36.0 * std::sqrt(3.0));
    case 3:
      return 19.0 / (192.0 * std::cbrt(2.0));
    case 4:
      return kKappa4;
    case 5:
      return kKappa5;
    default:
      return std::exp(log_kappa(p));
  }
}

Codelength mml87_codelength_log(double log_prior_density, double log_fisher_det, double neg_log_likelihood,
                                int p) {
  if (p <= 0) throw DomainError("mml87_codelength: parameter count must be positive");
  const double half_p = 0.5 * p;
  return Codelength{-log_prior_density + 0.5 * log_fisher_det + half_p * log_kappa(p) + half_p +
                    neg_log_likelihood};
}

Codelength mml87_codelength(const Mml87Inputs& in) {
  if (!(in.prior_density > 0.0)) throw DomainError("mml87_codelength: prior density must be positive");
  if (!(in.fisher_det > 0.0)) throw DomainError("mml87_codelength: Fisher determinant must be positive");
  return mml87_codelength_log(std::log(in.prior_density), std::log(in.fisher_det), in.neg_log_likelihood, in.p);
}

double uncertainty_volume(double fisher_det, int p) {
  if (!(fisher_det > 0.0)) throw DomainError("uncertainty_volume: Fisher determinant must be positive");
  if (p <= 0) throw DomainError("uncertainty_volume: parameter count must be positive");
  return std::exp(-0.5 * (std::log(fisher_det) + p * log_kappa(p)));
}

double posterior_log_odds(Codelength i0, Codelength i1) { return i0.nats - i1.nats; }

Hypothesis decide(Codelength i0, Codelength i1, double threshold_nats) {
  if (threshold_nats < 0.0) throw DomainError("decide: threshold must be nonnegative");
  return i1.nats + threshold_nats < i0.nats ? Hypothesis::Alternative : Hypothesis::Null;
}

}  // namespace mml
