#include "mml/smml_binomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "mml/error.hpp"
#include "mml/special.hpp"

namespace mml {

namespace {

void check_n(int n) {
  if (n < 1) throw DomainError("binomial: n must be at least 1, got " + std::to_string(n));
}

// Segment cost with log C(n, y) supplied by the caller.
double segment_cost_with(Segment seg, int n, std::span<const double> log_choose) {
  const double r = 1.0 / (n + 1.0);
  const double q = seg.size() * r;
  const double theta = segment_estimate(seg, n);
  const double log_theta = theta > 0.0 ? std::log(theta) : 0.0;
  const double log_1m = theta < 1.0 ? std::log1p(-theta) : 0.0;
  double detail = 0.0;
  for (int y = seg.lo; y <= seg.hi; ++y) {
    // 0 log 0 := 0 at the boundary estimates.
    detail += log_choose[y] + (y > 0 ? y * log_theta : 0.0) + (n - y > 0 ? (n - y) * log_1m : 0.0);
  }
  return -q * std::log(q) - r * detail;
}

std::vector<double> log_choose_table(int n) {
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int y = 0; y <= n; ++y) t[y] = log_binomial(n, y);
  return t;
}

SmmlPartition assemble(std::vector<Segment> segments, int n, double total_nats) {
  SmmlPartition out;
  out.n = n;
  out.estimates.reserve(segments.size());
  out.masses.reserve(segments.size());
  for (const auto& s : segments) {
    out.estimates.push_back(segment_estimate(s, n));
    out.masses.push_back(s.size() / (n + 1.0));
  }
  out.segments = std::move(segments);
  out.expected_codelength = Codelength{total_nats};
  return out;
}

}  // namespace

void validate(const BinomialObservation& obs) {
  check_n(obs.n);
  if (obs.y < 0 || obs.y > obs.n)
    throw DomainError("binomial: y = " + std::to_string(obs.y) + " outside {0.." + std::to_string(obs.n) + "}");
}

std::string SmmlPartition::segments_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(segments[i].lo) + ".." + std::to_string(segments[i].hi);
  }
  return s + "}";
}

std::string SmmlPartition::estimates_string(int decimals) const {
  std::string s = "{";
  char buf[64];
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (i) s += ", ";
    std::snprintf(buf, sizeof buf, "%.*f", decimals, estimates[i]);
    s += buf;
  }
  return s + "}";
}

double marginal(int n) {
  check_n(n);
  return 1.0 / (n + 1.0);
}

double segment_estimate(Segment seg, int n) {
  // sum_{y=lo}^{hi} y = (lo + hi) |t| / 2
  return (static_cast<double>(seg.lo) + seg.hi) / (2.0 * n);
}

double segment_cost(Segment seg, int n) {
  check_n(n);
  if (seg.lo < 0 || seg.hi > n || seg.lo > seg.hi) throw StructuralError("segment outside {0..n}");
  const auto table = log_choose_table(n);
  return segment_cost_with(seg, n, table);
}

SmmlPartition partition_codelength(std::span<const Segment> segments, int n) {
  check_n(n);
  if (segments.empty()) throw StructuralError("partition: no segments");
  int expect = 0;
  for (const auto& s : segments) {
    if (s.lo != expect || s.hi < s.lo)
      throw StructuralError("partition: segments must be contiguous and ascending from 0");
    expect = s.hi + 1;
  }
  if (expect != n + 1) throw StructuralError("partition: segments must end at n");

  const auto table = log_choose_table(n);
  double total = 0.0;
  for (const auto& s : segments) total += segment_cost_with(s, n, table);
  return assemble({segments.begin(), segments.end()}, n, total);
}

SmmlPartition solve_smml(int n) {
  check_n(n);
  if (n > kSmmlMaxN) throw DomainError("solve_smml: n exceeds " + std::to_string(kSmmlMaxN));

  const auto table = log_choose_table(n);
  // Node i is the boundary before outcome i; edge (a, b) is segment {a..b-1}.
  const int nodes = n + 2;
  std::vector<double> best(nodes, std::numeric_limits<double>::infinity());
  std::vector<int> back(nodes, 0);
  best[0] = 0.0;
  for (int b = 1; b < nodes; ++b) {
    for (int a = 0; a < b; ++a) {
      const double c = best[a] + segment_cost_with(Segment{a, b - 1}, n, table);
      const double tol = std::isfinite(best[b]) ? 1e-12 * std::max(1.0, std::abs(best[b])) : 0.0;
      if (c < best[b] - tol) {
        best[b] = c;
        back[b] = a;
      }
    }
  }

  std::vector<Segment> segments;
  for (int b = nodes - 1; b > 0; b = back[b]) segments.push_back(Segment{back[b], b - 1});
  std::reverse(segments.begin(), segments.end());
  return assemble(std::move(segments), n, best[nodes - 1]);
}

namespace {

std::size_t segment_index(const BinomialObservation& obs, const SmmlPartition& part) {
  if (obs.n != part.n)
    throw DomainError("smml: observation has n = " + std::to_string(obs.n) + " but partition was built for " +
                      std::to_string(part.n));
  validate(obs);
  const auto it = std::partition_point(part.segments.begin(), part.segments.end(),
                                       [&](const Segment& s) { return s.hi < obs.y; });
  return static_cast<std::size_t>(it - part.segments.begin());
}

}  // namespace

double smml_estimate(const BinomialObservation& obs, const SmmlPartition& part) {
  return part.estimates[segment_index(obs, part)];
}

Codelength smml_message_length(const BinomialObservation& obs, const SmmlPartition& part) {
  const std::size_t j = segment_index(obs, part);
  const double theta = part.estimates[j];
  const double log_p = log_binomial(obs.n, obs.y) + xlogy(obs.y, theta) + xlogy(obs.n - obs.y, 1.0 - theta);
  return Codelength{-std::log(part.masses[j]) - log_p};
}

}  // namespace mml
