#include "mml/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mml/error.hpp"

namespace mml {

namespace {

constexpr int kMaxTerms = 1'000'000;
constexpr double kTol = 1e-16;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

// log|Gamma(x)| and its sign; thread-safe unlike ::lgamma.
double lgamma_signed(double x, int& sign) { return boost::math::lgamma(x, &sign); }

// Product of gammas as sign * exp(log_mag): num terms over den terms. Any
// pole in the denominator makes the whole coefficient zero.
double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den) {
  double log_mag = 0.0;
  int sign = 1;
  for (double d : den) {
    if (is_nonpositive_integer(d)) return 0.0;
    int s = 1;
    log_mag -= lgamma_signed(d, s);
    sign *= s;
  }
  for (double n : num) {
    int s = 1;
    log_mag += lgamma_signed(n, s);
    sign *= s;
  }
  return sign * std::exp(log_mag);
}

// Plain power series. Valid for any |z| < 1; used directly when it
// converges quickly, and for the 1 - z series of the connection formulas.
double series_2f1(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    // Once the term ratio has settled below one the remaining tail is
    // bounded by a geometric series.
    const double r = std::abs(ratio);
    if (k > 2 && c + k > 1.0 && r < 1.0 && std::abs(term) * r / (1.0 - r) <= kTol * std::abs(sum)) return sum;
  }
  throw NumericalError("gauss_2f1: series did not converge in " + std::to_string(kMaxTerms) + " terms");
}

// c - a - b = m, m a nonnegative integer; logarithmic connection formula.
double log_case_2f1(double a, double b, int m, double w) {
  const double c = a + b + m;
  double finite = 0.0;
  if (m >= 1) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < m - 1; ++k) {
      term *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k)) * w;
      sum += term;
    }
    finite = gamma_ratio({static_cast<double>(m), c}, {a + m, b + m}) * sum;
  }

  // sum_k (a+m)_k (b+m)_k / (k! (k+m)!) w^k [log w - psi(k+1) - psi(k+m+1)
  //                                          + psi(a+k+m) + psi(b+k+m)]
  const double log_w = std::log(w);
  double coeff = 1.0;
  for (int j = 1; j <= m; ++j) coeff /= j;  // 1 / m!
  double sum = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    if (k > 0) coeff *= (a + m + k - 1) * (b + m + k - 1) / (static_cast<double>(k) * (k + m)) * w;
    const double bracket = log_w - boost::math::digamma(k + 1.0) - boost::math::digamma(k + m + 1.0) +
                           boost::math::digamma(a + k + m) + boost::math::digamma(b + k + m);
    const double term = coeff * bracket;
    sum += term;
    if (k > 2 && std::abs(coeff) * (std::abs(bracket) + 1.0) <= kTol * std::abs(sum)) break;
    if (k == kMaxTerms - 1) throw NumericalError("gauss_2f1: logarithmic series did not converge");
  }
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;  // (z - 1)^m = (-w)^m
  const double tail = -gamma_ratio({c}, {a, b}) * sign_m * std::pow(w, m) * sum;
  return finite + tail;
}

}  // namespace

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) throw DomainError("log_binomial: k outside [0, n]");
  if (k == 0 || k == n) return 0.0;
  int s = 1;
  return lgamma_signed(n + 1.0, s) - lgamma_signed(k + 1.0, s) - lgamma_signed(static_cast<double>(n - k) + 1.0, s);
}

double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log(y);
}

double gauss_2f1(double a, double b, double c, double z) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("gauss_2f1: z must lie in [0, 1)");
  if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c must not be a nonpositive integer");
  if (z == 0.0) return 1.0;

  // Terminating series: a polynomial in z.
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return series_2f1(a, b, c, z);

  const double s = c - a - b;
  // With s large the terms fall off like k^-(s+1) and the direct series is
  // fine all the way to z -> 1.
  if (z <= 0.75 || s >= 6.0) return series_2f1(a, b, c, z);

  const double w = 1.0 - z;
  const double m = std::nearbyint(s);
  if (std::abs(s - m) > 1e-9) {
    const double first = gamma_ratio({c, s}, {c - a, c - b});
    const double second = gamma_ratio({c, -s}, {a, b});
    double value = 0.0;
    if (first != 0.0) value += first * series_2f1(a, b, 1.0 - s, w);
    if (second != 0.0) value += second * std::pow(w, s) * series_2f1(c - a, c - b, 1.0 + s, w);
    return value;
  }
  if (m < 0) {
    // Euler: 2F1(a,b;c;z) = w^(c-a-b) 2F1(c-a, c-b; c; z), flipping the sign of m.
    return std::pow(w, s) * gauss_2f1(c - a, c - b, c, z);
  }
  return log_case_2f1(a, b, static_cast<int>(m), w);
}

double student_t_log_pdf(double x, double df, double location, double scale) {
  if (!(df > 0.0) || !(scale > 0.0)) throw DomainError("student_t_pdf: df and scale must be positive");
  const double zz = (x - location) / scale;
  int s = 1;
  return lgamma_signed(0.5 * (df + 1.0), s) - lgamma_signed(0.5 * df, s) -
         0.5 * std::log(df * std::numbers::pi) - std::log(scale) -
         0.5 * (df + 1.0) * std::log1p(zz * zz / df);
}

double student_t_pdf(double x, double df, double location, double scale) {
  return std::exp(student_t_log_pdf(x, df, location, scale));
}

// Power series in w = ncp x sqrt(2 / (df + x^2)):
//   f(x) = C sum_k Gamma((df + k + 1) / 2) w^k / k!,
//   C = df^(df/2) exp(-ncp^2 / 2) / (sqrt(pi) Gamma(df/2) (df + x^2)^((df+1)/2)).
// Even and odd terms follow separate two-step recurrences; everything is kept
// in logs relative to the largest term so large ncp neither overflows nor underflows.
// When ncp x < 0 the series alternates; if it cancels badly an integral form is used.
double noncentral_t_pdf(double x, double df, double ncp) {
  if (!(df > 0.0)) throw DomainError("noncentral_t_pdf: df must be positive");
  if (!std::isfinite(x) || !std::isfinite(ncp)) throw DomainError("noncentral_t_pdf: arguments must be finite");
  const double q = df + x * x;
  const double log_c = 0.5 * df * std::log(df) - 0.5 * ncp * ncp - 0.5 * std::log(std::numbers::pi) -
                       boost::math::lgamma(0.5 * df) - 0.5 * (df + 1.0) * std::log(q);
  const double w = ncp * x * std::sqrt(2.0 / q);
  const double l0 = boost::math::lgamma(0.5 * (df + 1.0));
  if (w == 0.0) return std::exp(log_c + l0);
  // For w < 0 the sum is below its w = 0 value; skip work that would underflow.
  if (w < 0.0 && log_c + l0 < -800.0) return 0.0;

  // Same sum as 2^(-(df-1)/2) int_0^inf s^df exp(-s^2/2 + v s) ds, v = w / sqrt(2),
  // whose integrand is positive and log-concave.
  auto integral_form = [&] {
    const double v = w / std::numbers::sqrt2;
    const double s_star = 0.5 * (v + std::sqrt(v * v + 4.0 * df));
    auto h = [&](double s) { return df * std::log(s) - 0.5 * s * s + v * s; };
    const double h_star = h(s_star);
    // h(s*) - h(s* + u) without cancelling large terms, using v - s* = -df / s*.
    auto f = [&](double s) {
      if (!(s > 0.0)) return 0.0;
      const double u = s - s_star, e = u / s_star;
      return std::exp(df * (std::log1p(e) - e) - 0.5 * u * u);
    };
    // h'' <= -1, so the integrand is below exp(-800) more than 40 from the
    // mode. Near the mode its width is about 1 / sqrt(1 + df / s*^2), which can
    // be tiny; geometric breakpoints let the adaptive rule find it.
    const double width = 1.0 / std::sqrt(1.0 + df / (s_star * s_star));
    std::vector<double> cuts{std::max(0.0, s_star - 40.0), s_star, s_star + 40.0};
    for (double m = width; m < 40.0; m *= 4.0) {
      cuts.push_back(s_star + m);
      if (s_star - m > 0.0) cuts.push_back(s_star - m);
    }
    std::sort(cuts.begin(), cuts.end());
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double j = 0.0, err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      double err = 0.0;
      j += GK::integrate(f, cuts[i], cuts[i + 1], 15, 1e-13, &err);
      err_total += err;
    }
    if (!(j > 0.0) || err_total > 1e-10 * j) throw NumericalError("noncentral_t_pdf: quadrature failed");
    return std::exp(log_c - 0.5 * (df - 1.0) * std::numbers::ln2 + h_star + std::log(j));
  };
  // The series peaks near k = w^2 / 2; past that it is cheaper to integrate.
  if (w * w > 2000.0) return integral_form();

  const double log_w2 = 2.0 * std::log(std::abs(w));
  constexpr int kMaxTerms = 1000000;
  std::vector<double> logs;
  logs.reserve(64);
  logs.push_back(l0);
  logs.push_back(boost::math::lgamma(0.5 * (df + 2.0)) + 0.5 * log_w2);
  double peak = std::max(logs[0], logs[1]);
  for (int k = 2;; ++k) {
    const double prev = logs[k - 2];
    const double next = prev + log_w2 + std::log(0.5 * (df + k - 1.0)) - std::log(static_cast<double>(k) * (k - 1));
    logs.push_back(next);
    peak = std::max(peak, next);
    // Terms are unimodal in each parity; stop once both chains are falling and negligible.
    if (k >= 3 && next < prev && logs[k - 1] < logs[k - 3] && next < peak - 40.0 && logs[k - 1] < peak - 40.0)
      break;
    if (k > kMaxTerms) throw NumericalError("noncentral_t_pdf: series did not converge");
  }
  double sum = 0.0, abs_sum = 0.0;
  const bool alternate = w < 0.0;
  for (std::size_t k = logs.size(); k-- > 0;) {
    const double term = std::exp(logs[k] - peak);
    sum += (alternate && (k % 2 == 1)) ? -term : term;
    abs_sum += term;
  }
  if (sum > 1e-3 * abs_sum) return std::exp(log_c + peak + std::log(sum));

  // Heavy cancellation when ncp x < 0.
  return integral_form();
}

}  // namespace mml
