#pragma once

#include <span>
#include <string>
#include <vector>

#include "mml/codelength.hpp"

namespace mml {

/// y successes in n trials.
struct BinomialObservation {
  int n = 1;
  int y = 0;
};

/// Throws DomainError unless n >= 1 and 0 <= y <= n.
void validate(const BinomialObservation& obs);

/// Contiguous block {lo..hi} of the data space {0..n}, inclusive.
struct Segment {
  int lo = 0;
  int hi = 0;

  int size() const { return hi - lo + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// A Strict MML code for Binomial(n, theta) under the uniform prior: an
/// ordered cover of {0..n} by segments, one point estimate per segment and
/// the expected two-part codelength.
struct SmmlPartition {
  int n = 0;
  std::vector<Segment> segments;
  std::vector<double> estimates;  // theta*_j, strictly increasing
  std::vector<double> masses;     // q_j = |t_j| / (n + 1)
  Codelength expected_codelength;

  /// "{0..0, 1..4, 5..9, 10..10}"
  std::string segments_string() const;
  /// "{0.000, 0.250, 0.700, 1.000}"
  std::string estimates_string(int decimals = 3) const;
};

/// Largest n accepted by solve_smml.
inline constexpr int kSmmlMaxN = 2000;

/// Marginal probability r(y) = 1/(n+1) of each outcome under the uniform prior.
double marginal(int n);

/// Mean success fraction over the segment: sum(y) / (n |t|).
double segment_estimate(Segment seg, int n);

/// Contribution of one segment to the expected codelength (nats):
/// -q log q - sum_{y in seg} r(y) log p(y | theta*).
double segment_cost(Segment seg, int n);

/// Scores an explicit partition. Throws StructuralError unless the segments
/// cover {0..n} contiguously in ascending order.
SmmlPartition partition_codelength(std::span<const Segment> segments, int n);

/// Optimal partition by shortest path over segment boundaries. Ties are
/// broken toward the first predecessor found on an ascending scan; costs
/// within 1e-12 (relative) of the incumbent do not displace it.
SmmlPartition solve_smml(int n);

/// Estimate of the segment holding obs.y. Throws DomainError if y is outside
/// {0..n} or obs.n does not match the partition.
double smml_estimate(const BinomialObservation& obs, const SmmlPartition& part);

/// Two-part length of the message for obs.y: -log q_j - log p(y | theta*_j).
Codelength smml_message_length(const BinomialObservation& obs, const SmmlPartition& part);

}  // namespace mml
