#pragma once

#include <cstdint>

namespace mml {

/// log C(n, k) via log-gamma; finite for any 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);

/// x * log(y) with the 0 * log 0 := 0 convention.
double xlogy(double x, double y);

/// Gauss hypergeometric function 2F1(a, b; c; z) for 0 <= z < 1.
///
/// Sums the defining series directly for z <= 0.75. Closer to 1 the series
/// converges too slowly (terms decay like k^(a+b-c-1) z^k), so the function
/// switches to the connection formulas in 1 - z, including the logarithmic
/// form when c - a - b is an integer.
///
/// Throws DomainError for z outside [0, 1) or c a nonpositive integer, and
/// NumericalError if a series fails to converge within 10^6 terms.
double gauss_2f1(double a, double b, double c, double z);

/// Location-scale Student-t density.
double student_t_log_pdf(double x, double df, double location, double scale);
double student_t_pdf(double x, double df, double location, double scale);

/// Noncentral Student-t density with df degrees of freedom and
/// noncentrality ncp. ncp == 0 gives the central density.
double noncentral_t_pdf(double x, double df, double ncp);

}  // namespace mml
