#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "mml/error.hpp"
#include "mml/smml_binomial.hpp"
#include "oracles.hpp"
#include "smml_reference.hpp"

using namespace mml;

TEST_CASE("dynamic programme matches exhaustive enumeration") {
  for (int n = 1; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(std::abs(solve_smml(n).expected_codelength.nats - oracle::smml_exhaustive_minimum(n)) < 1e-10);
  }
}

TEST_CASE("expected codelengths match the reference table") {
  for (const auto& row : kSmmlReference) {
    CAPTURE(row.n);
    const SmmlPartition p = solve_smml(row.n);
    CHECK(std::abs(p.expected_codelength.bits() - row.codelength_bits) < 0.001);
  }
}

TEST_CASE("n = 10 partition") {
  const SmmlPartition p = solve_smml(10);
  CHECK(p.segments_string() == "{0..0, 1..4, 5..9, 10..10}");
  CHECK(p.estimates_string() == "{0.000, 0.250, 0.700, 1.000}");
  CHECK(p.masses.size() == 4);
  CHECK(p.masses[1] == doctest::Approx(4.0 / 11.0));
  CHECK(smml_estimate({10, 3}, p) == doctest::Approx(0.25));
  CHECK(smml_estimate({10, 0}, p) == 0.0);
  CHECK(smml_estimate({10, 10}, p) == 1.0);
  const double msg = -std::log(4.0 / 11.0) - (std::log(120.0) + 3 * std::log(0.25) + 7 * std::log(0.75));
  CHECK(smml_message_length({10, 3}, p).nats == doctest::Approx(msg).epsilon(1e-13));
}

TEST_CASE("hand-built partitions") {
  const std::vector<Segment> whole{{0, 10}};
  CHECK(partition_codelength(whole, 10).expected_codelength.bits() == doctest::Approx(5.01).epsilon(0.002));
  std::vector<Segment> singletons;
  for (int y = 0; y <= 10; ++y) singletons.push_back({y, y});
  // log(n+1) - 1/(n+1) sum log p(i | i/n) = 4.915 bits
  double singleton_nats = 0.0;
  for (int y = 0; y <= 10; ++y) singleton_nats += oracle::smml_segment_cost(y, y, 10);
  const double singleton = partition_codelength(singletons, 10).expected_codelength.nats;
  CHECK(singleton == doctest::Approx(singleton_nats).epsilon(1e-13));
  CHECK(singleton / std::log(2.0) == doctest::Approx(4.915449).epsilon(1e-6));
  const std::vector<Segment> ten{{0, 0}, {1, 4}, {5, 9}, {10, 10}};
  CHECK(partition_codelength(ten, 10).expected_codelength.nats ==
        doctest::Approx(solve_smml(10).expected_codelength.nats).epsilon(1e-14));
  double sum = 0.0;
  for (const auto& s : ten) sum += segment_cost(s, 10);
  CHECK(sum == doctest::Approx(solve_smml(10).expected_codelength.nats).epsilon(1e-14));
  CHECK(segment_cost({1, 4}, 10) == doctest::Approx(oracle::smml_segment_cost(1, 4, 10)).epsilon(1e-13));
  CHECK(segment_estimate({1, 4}, 10) == doctest::Approx(0.25));
  CHECK(marginal(10) == doctest::Approx(1.0 / 11.0));
}

TEST_CASE("malformed partitions are rejected") {
  const std::vector<Segment> gap{{0, 3}, {5, 10}};
  const std::vector<Segment> overlap{{0, 5}, {5, 10}};
  const std::vector<Segment> short_cover{{0, 3}, {4, 9}};
  const std::vector<Segment> reversed{{4, 10}, {0, 3}};
  const std::vector<Segment> empty;
  CHECK_THROWS_AS(partition_codelength(gap, 10), StructuralError);
  CHECK_THROWS_AS(partition_codelength(overlap, 10), StructuralError);
  CHECK_THROWS_AS(partition_codelength(short_cover, 10), StructuralError);
  CHECK_THROWS_AS(partition_codelength(reversed, 10), StructuralError);
  CHECK_THROWS_AS(partition_codelength(empty, 10), StructuralError);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_smml(0), DomainError);
  CHECK_THROWS_AS(solve_smml(kSmmlMaxN + 1), DomainError);
  const SmmlPartition p = solve_smml(10);
  CHECK_THROWS_AS(smml_estimate({10, 11}, p), DomainError);
  CHECK_THROWS_AS(smml_estimate({9, 3}, p), DomainError);
  CHECK_THROWS_AS(validate(BinomialObservation{5, -1}), DomainError);
}

TEST_CASE("solution structure") {
  for (int n = 1; n <= 200; n += 7) {
    const SmmlPartition p = solve_smml(n);
    CAPTURE(n);
    REQUIRE(p.segments.size() == p.estimates.size());
    CHECK(p.segments.front().lo == 0);
    CHECK(p.segments.back().hi == n);
    double mass = 0.0;
    for (std::size_t j = 0; j < p.segments.size(); ++j) {
      if (j > 0) {
        CHECK(p.segments[j].lo == p.segments[j - 1].hi + 1);
        CHECK(p.estimates[j] > p.estimates[j - 1]);
      }
      mass += p.masses[j];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("codelength is symmetric under relabelling successes and failures") {
  for (int n = 1; n <= 40; ++n) {
    const SmmlPartition p = solve_smml(n);
    std::vector<Segment> mirror;
    for (auto it = p.segments.rbegin(); it != p.segments.rend(); ++it) mirror.push_back({n - it->hi, n - it->lo});
    CHECK(partition_codelength(mirror, n).expected_codelength.nats ==
          doctest::Approx(p.expected_codelength.nats).epsilon(1e-12));
  }
}
