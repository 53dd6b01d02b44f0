#pragma once

#include <array>
#include <string_view>

// Published optimal partitions of the binomial data space under a uniform
// prior, estimates to three decimals and expected codelengths in bits.
struct SmmlReferenceRow {
  int n;
  std::string_view partition;
  std::string_view estimates;
  double codelength_bits;
};

inline constexpr std::array<SmmlReferenceRow, 30> kSmmlReference{{
    {1, "{0..1}", "{0.500}", 1.000},
    {2, "{0..0, 1..2}", "{0.000, 0.750}", 1.667},
    {3, "{0..0, 1..3}", "{0.000, 0.667}", 2.085},
    {4, "{0..0, 1..3, 4..4}", "{0.000, 0.500, 1.000}", 2.454},
    {5, "{0..0, 1..4, 5..5}", "{0.000, 0.500, 1.000}", 2.704},
    {6, "{0..0, 1..5, 6..6}", "{0.000, 0.500, 1.000}", 2.962},
    {7, "{0..3, 4..7}", "{0.214, 0.786}", 3.165},
    {8, "{0..2, 3..7, 8..8}", "{0.125, 0.625, 1.000}", 3.337},
    {9, "{0..0, 1..5, 6..9}", "{0.000, 0.333, 0.833}", 3.491},
    {10, "{0..0, 1..4, 5..9, 10..10}", "{0.000, 0.250, 0.700, 1.000}", 3.647},
    {11, "{0..0, 1..5, 6..10, 11..11}", "{0.000, 0.273, 0.727, 1.000}", 3.762},
    {12, "{0..0, 1..6, 7..11, 12..12}", "{0.000, 0.292, 0.750, 1.000}", 3.887},
    {13, "{0..0, 1..6, 7..12, 13..13}", "{0.000, 0.269, 0.731, 1.000}", 3.998},
    {14, "{0..3, 4..10, 11..14}", "{0.107, 0.500, 0.893}", 4.107},
    {15, "{0..0, 1..5, 6..12, 13..15}", "{0.000, 0.200, 0.600, 0.933}", 4.204},
    {16, "{0..0, 1..5, 6..12, 13..16}", "{0.000, 0.188, 0.563, 0.906}", 4.289},
    {17, "{0..0, 1..6, 7..13, 14..17}", "{0.000, 0.206, 0.588, 0.912}", 4.372},
    {18, "{0..0, 1..5, 6..12, 13..17, 18..18}", "{0.000, 0.167, 0.500, 0.833, 1.000}", 4.457},
    {19, "{0..0, 1..5, 6..12, 13..18, 19..19}", "{0.000, 0.158, 0.474, 0.816, 1.000}", 4.531},
    {20, "{0..0, 1..6, 7..14, 15..19, 20..20}", "{0.000, 0.175, 0.525, 0.850, 1.000}", 4.601},
    {21, "{0..0, 1..6, 7..14, 15..20, 21..21}", "{0.000, 0.167, 0.500, 0.833, 1.000}", 4.665},
    {22, "{0..0, 1..6, 7..15, 16..21, 22..22}", "{0.000, 0.159, 0.500, 0.841, 1.000}", 4.737},
    {23, "{0..3, 4..11, 12..19, 20..23}", "{0.065, 0.326, 0.674, 0.935}", 4.801},
    {24, "{0..2, 3..9, 10..17, 18..23, 24..24}", "{0.042, 0.250, 0.563, 0.854, 1.000}", 4.863},
    {25, "{0..0, 1..6, 7..15, 16..22, 23..25}", "{0.000, 0.140, 0.440, 0.760, 0.960}", 4.920},
    {26, "{0..0, 1..6, 7..14, 15..22, 23..26}", "{0.000, 0.135, 0.404, 0.712, 0.942}", 4.974},
    {27, "{0..0, 1..6, 7..15, 16..23, 24..27}", "{0.000, 0.130, 0.407, 0.722, 0.944}", 5.025},
    {28, "{0..3, 4..12, 13..21, 22..27, 28..28}", "{0.054, 0.286, 0.607, 0.875, 1.000}", 5.080},
    {29, "{0..4, 5..13, 14..22, 23..28, 29..29}", "{0.069, 0.310, 0.621, 0.879, 1.000}", 5.129},
    {30, "{0..0, 1..5, 6..14, 15..23, 24..29, 30..30}", "{0.000, 0.100, 0.333, 0.633, 0.883, 1.000}", 5.176},
}};
