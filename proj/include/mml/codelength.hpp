#pragma once

#include <compare>
#include <numbers>
#include <optional>
#include <string_view>

namespace mml {

/// A message length. Stored in nats; bits are a display conversion.
struct Codelength {
  double nats = 0.0;

  static constexpr Codelength from_nats(double v) { return Codelength{v}; }
  static constexpr Codelength from_bits(double v) { return Codelength{v * std::numbers::ln2}; }

  constexpr double bits() const { return nats / std::numbers::ln2; }

  constexpr Codelength& operator+=(Codelength o) {
    nats += o.nats;
    return *this;
  }
  friend constexpr Codelength operator+(Codelength a, Codelength b) { return Codelength{a.nats + b.nats}; }
  friend constexpr Codelength operator-(Codelength a, Codelength b) { return Codelength{a.nats - b.nats}; }
  friend constexpr auto operator<=>(Codelength a, Codelength b) = default;
};

enum class Units { Bits, Nats };

constexpr double in_units(Codelength c, Units u) { return u == Units::Bits ? c.bits() : c.nats; }
constexpr std::string_view unit_name(Units u) { return u == Units::Bits ? "bits" : "nats"; }

/// Log of the normalising constant of an improper right-Haar prior. It
/// cancels in any difference between two models sharing the same range.
struct PriorRange {
  double log_omega = 0.0;
};

/// Everything the MML87 approximation needs at one parameter point.
struct Mml87Inputs {
  double prior_density = 1.0;
  double fisher_det = 1.0;
  double neg_log_likelihood = 0.0;  // nats
  int p = 1;
};

/// Lattice quantisation constant for dimension p (p >= 1).
double kappa(int p);

/// log(kappa(p)), evaluated without round-tripping through exp for large p.
double log_kappa(int p);

/// MML87 codelength: -log pi + 1/2 log|J| + p/2 log kappa_p + p/2 + nll.
Codelength mml87_codelength(const Mml87Inputs& in);

/// Same assembly, taking the prior density and Fisher determinant as logs.
/// Models with very large |J| or tiny prior densities go through here.
Codelength mml87_codelength_log(double log_prior_density, double log_fisher_det,
                                double neg_log_likelihood, int p);

/// Volume of the uncertainty region, w = (|J| kappa_p^p)^(-1/2).
double uncertainty_volume(double fisher_det, int p);

/// I0 - I1; positive values favour the second model.
double posterior_log_odds(Codelength i0, Codelength i1);

enum class Hypothesis { Null, Alternative };

constexpr std::string_view hypothesis_name(Hypothesis h) { return h == Hypothesis::Null ? "H0" : "H1"; }

/// Conventional margin (nats) for a "substantial" preference.
inline constexpr double kSubstantialNats = 2.3;

/// Picks H1 iff i1 + threshold < i0.
Hypothesis decide(Codelength i0, Codelength i1, double threshold_nats = 0.0);

struct HypothesisResult {
  Codelength null_codelength;
  Codelength alt_codelength;
  double difference_nats = 0.0;  // I0 - I1
  Hypothesis selected = Hypothesis::Null;
  std::optional<double> bayes_factor;
};

}  // namespace mml
