#include "mml/ttest.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mml/error.hpp"
#include "mml/optimize.hpp"
#include "mml/special.hpp"

namespace mml {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// Per-group centred summaries; everything the alternative codelength needs.
struct GroupSummary {
  double n1 = 0.0, n2 = 0.0;
  double m1 = 0.0, m2 = 0.0;
  double ss1 = 0.0, ss2 = 0.0;  // sum of squared deviations from the group mean
};

void check_sizes(const TwoSampleData& data) {
  if (data.y1.size() < 2 || data.y2.size() < 2)
    throw DegenerateDataError("t-test: each group needs at least two observations");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double centred_ss(const std::vector<double>& v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s;
}

GroupSummary summarise(const TwoSampleData& data) {
  GroupSummary g;
  g.n1 = static_cast<double>(data.y1.size());
  g.n2 = static_cast<double>(data.y2.size());
  g.m1 = mean_of(data.y1);
  g.m2 = mean_of(data.y2);
  g.ss1 = centred_ss(data.y1, g.m1);
  g.ss2 = centred_ss(data.y2, g.m2);
  return g;
}

double log_prior_delta(double delta, const EffectSizePrior& p) {
  return student_t_log_pdf(delta, p.df, p.location, p.scale);
}

double dlog_prior_delta(double delta, const EffectSizePrior& p) {
  const double z = (delta - p.location) / p.scale;
  return -(p.df + 1.0) * z / (p.scale * (p.df + z * z));
}

// Alternative codelength in (mu, log sigma, delta), from summaries.
double alt_objective(const GroupSummary& g, double mu, double log_sigma, double delta, const EffectSizePrior& prior,
                     double log_omega) {
  const double n = g.n1 + g.n2;
  const double s = std::exp(log_sigma);
  const double e1 = g.m1 - mu - 0.5 * s * delta;
  const double e2 = g.m2 - mu + 0.5 * s * delta;
  const double w = g.ss1 + g.ss2 + g.n1 * e1 * e1 + g.n2 * e2 * e2;
  const double nll = 0.5 * n * kLog2Pi + n * log_sigma + w / (2.0 * s * s);
  // -log pi_1 = log Omega + log sigma - log pi(delta); 1/2 log|J| = 1/2 log(2 n1 n2 n) - 2 log sigma
  const double log_prior = -log_omega - log_sigma + log_prior_delta(delta, prior);
  const double log_fisher = std::log(2.0 * g.n1 * g.n2 * n) - 4.0 * log_sigma;
  return mml87_codelength_log(log_prior, log_fisher, nll, 3).nats;
}

std::array<double, 3> alt_gradient(const GroupSummary& g, double mu, double log_sigma, double delta,
                                   const EffectSizePrior& prior) {
  const double n = g.n1 + g.n2;
  const double s = std::exp(log_sigma);
  const double e1 = g.m1 - mu - 0.5 * s * delta;
  const double e2 = g.m2 - mu + 0.5 * s * delta;
  const double w = g.ss1 + g.ss2 + g.n1 * e1 * e1 + g.n2 * e2 * e2;
  const double contrast = g.n2 * e2 - g.n1 * e1;
  return {-(g.n1 * e1 + g.n2 * e2) / (s * s), (n - 1.0) + delta * contrast / (2.0 * s) - w / (s * s),
          contrast / (2.0 * s) - dlog_prior_delta(delta, prior)};
}

// Solves the 3x3 system h x = b by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> h, std::array<double, 3> b, std::array<double, 3>& x) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(h[r][c]) > std::abs(h[piv][c])) piv = r;
    if (std::abs(h[piv][c]) < 1e-300) return false;
    std::swap(h[c], h[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = h[r][c] / h[c][c];
      for (int k = c; k < 3; ++k) h[r][k] -= f * h[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < 3; ++k) s -= h[r][k] * x[k];
    x[r] = s / h[r][r];
  }
  return true;
}

double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

TTestSufficientStats ttest_stats(const TwoSampleData& data) {
  check_sizes(data);
  const auto g = summarise(data);
  TTestSufficientStats st;
  st.n1 = static_cast<int>(data.y1.size());
  st.n2 = static_cast<int>(data.y2.size());
  st.mean1 = g.m1;
  st.mean2 = g.m2;
  st.s1_sq = g.ss1 / (g.n1 - 1.0);
  st.s2_sq = g.ss2 / (g.n2 - 1.0);
  st.nu = st.n1 + st.n2 - 2;
  st.n_delta = 1.0 / (1.0 / g.n1 + 1.0 / g.n2);
  const double pooled_var = (g.ss1 + g.ss2) / st.nu;
  if (!(pooled_var > 0.0)) throw DegenerateDataError("t-test: pooled variance is zero");
  st.pooled_sd = std::sqrt(pooled_var);
  st.t = std::sqrt(st.n_delta) * (st.mean1 - st.mean2) / st.pooled_sd;
  for (double x : data.y1) {
    st.sum1 += x;
    st.sum_sq += x * x;
  }
  for (double x : data.y2) {
    st.sum2 += x;
    st.sum_sq += x * x;
  }
  return st;
}

double null_neg_log_likelihood(const TwoSampleData& data, const NullParams& params) {
  if (!(params.sigma > 0.0)) throw DomainError("null model: sigma must be positive");
  const double n = static_cast<double>(data.y1.size() + data.y2.size());
  double ss = 0.0;
  for (double x : data.y1) ss += (x - params.mu) * (x - params.mu);
  for (double x : data.y2) ss += (x - params.mu) * (x - params.mu);
  return 0.5 * n * std::log(2.0 * std::numbers::pi * params.sigma * params.sigma) +
         ss / (2.0 * params.sigma * params.sigma);
}

Codelength null_codelength_at(const TwoSampleData& data, const NullParams& params, PriorRange range) {
  const double n = static_cast<double>(data.y1.size() + data.y2.size());
  const double log_sigma = std::log(params.sigma);
  const double log_prior = -range.log_omega - log_sigma;                 // (Omega sigma)^-1
  const double log_fisher = std::log(2.0 * n * n) - 4.0 * log_sigma;    // 2 n^2 / sigma^4
  return mml87_codelength_log(log_prior, log_fisher, null_neg_log_likelihood(data, params), 2);
}

std::pair<Codelength, NullParams> null_codelength(const TwoSampleData& data, PriorRange range) {
  check_sizes(data);
  const double n = static_cast<double>(data.y1.size() + data.y2.size());
  double mean = 0.0;
  for (double x : data.y1) mean += x;
  for (double x : data.y2) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : data.y1) ss += (x - mean) * (x - mean);
  for (double x : data.y2) ss += (x - mean) * (x - mean);
  const double var = ss / (n - 1.0);
  if (!(var > 0.0)) throw DegenerateDataError("null model: sample variance is zero");

  // (n-1)/2 (1 + log s^2) + 1/2 log(2^(n+1) pi^n (n e kappa_2 Omega)^2)
  const double constant = 0.5 * ((n + 1.0) * std::numbers::ln2 + n * std::log(std::numbers::pi)) + std::log(n) +
                          1.0 + log_kappa(2) + range.log_omega;
  const Codelength len{0.5 * (n - 1.0) * (1.0 + std::log(var)) + constant};
  return {len, NullParams{mean, std::sqrt(var)}};
}

double alt_neg_log_likelihood(const TwoSampleData& data, const AltParams& params) {
  if (!(params.sigma > 0.0)) throw DomainError("alternative model: sigma must be positive");
  const double n = static_cast<double>(data.y1.size() + data.y2.size());
  const double shift = 0.5 * params.sigma * params.delta;
  double ss = 0.0;
  for (double x : data.y1) ss += (x - params.mu - shift) * (x - params.mu - shift);
  for (double x : data.y2) ss += (x - params.mu + shift) * (x - params.mu + shift);
  return 0.5 * n * std::log(2.0 * std::numbers::pi * params.sigma * params.sigma) +
         ss / (2.0 * params.sigma * params.sigma);
}

AltParams ml_alt_estimates(const TwoSampleData& data) {
  check_sizes(data);
  const auto g = summarise(data);
  const double n = g.n1 + g.n2;
  const double var = (g.ss1 + g.ss2) / n;  // (S^2 - n1 m1^2 - n2 m2^2) / n
  if (!(var > 0.0)) throw DegenerateDataError("alternative model: ML variance is zero");
  const double sigma = std::sqrt(var);
  return AltParams{0.5 * (g.m1 + g.m2), sigma, (g.m1 - g.m2) / sigma};
}

Codelength alt_codelength(const TwoSampleData& data, const AltParams& params, const EffectSizePrior& prior,
                          PriorRange range) {
  if (!(params.sigma > 0.0)) throw DomainError("alternative model: sigma must be positive");
  check_sizes(data);
  const double n1 = static_cast<double>(data.y1.size());
  const double n2 = static_cast<double>(data.y2.size());
  const double log_sigma = std::log(params.sigma);
  const double log_prior = -range.log_omega - log_sigma + log_prior_delta(params.delta, prior);
  const double log_fisher = std::log(2.0 * n1 * n2 * (n1 + n2)) - 4.0 * log_sigma;
  return mml87_codelength_log(log_prior, log_fisher, alt_neg_log_likelihood(data, params), 3);
}

AltFit fit_alt(const TwoSampleData& data, const EffectSizePrior& prior, PriorRange range) {
  const AltParams ml = ml_alt_estimates(data);
  const double n = static_cast<double>(data.y1.size() + data.y2.size());

  // Work on data standardised by the ML location and scale; the codelength
  // shifts by (n - 1) log sigma_ML and the parameters map back affinely.
  GroupSummary g = summarise(data);
  g.m1 = (g.m1 - ml.mu) / ml.sigma;
  g.m2 = (g.m2 - ml.mu) / ml.sigma;
  g.ss1 /= ml.sigma * ml.sigma;
  g.ss2 /= ml.sigma * ml.sigma;

  auto f = [&](std::span<const double> x) { return alt_objective(g, x[0], x[1], x[2], prior, range.log_omega); };
  const std::array<double, 3> steps{0.1, 0.1, 0.25};

  MinimizeResult best = nelder_mead(f, {0.0, 0.0, ml.delta}, steps);
  if (std::abs(ml.delta - prior.location) > 1e-3) {
    MinimizeResult other = nelder_mead(f, {0.0, 0.0, prior.location}, steps);
    if (other.value < best.value) best = std::move(other);
  }

  // Newton polish with the analytic gradient and a differenced Hessian.
  std::array<double, 3> x{best.x[0], best.x[1], best.x[2]};
  double fx = f(x);
  auto grad = [&](const std::array<double, 3>& p) { return alt_gradient(g, p[0], p[1], p[2], prior); };
  std::array<double, 3> gr = grad(x);
  int iters = best.iterations;
  for (int it = 0; it < 50 && norm3(gr) > 1e-10; ++it, ++iters) {
    std::array<std::array<double, 3>, 3> h{};
    for (int j = 0; j < 3; ++j) {
      const double step = 1e-5 * std::max(1.0, std::abs(x[j]));
      auto xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      const auto gp = grad(xp), gm = grad(xm);
      for (int i = 0; i < 3; ++i) h[i][j] = (gp[i] - gm[i]) / (2.0 * step);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) h[i][j] = h[j][i] = 0.5 * (h[i][j] + h[j][i]);
    std::array<double, 3> dx{};
    if (!solve3(h, {-gr[0], -gr[1], -gr[2]}, dx)) break;
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const std::array<double, 3> xn{x[0] + t * dx[0], x[1] + t * dx[1], x[2] + t * dx[2]};
      const double fn = f(xn);
      const auto gn = grad(xn);
      if (fn <= fx + 1e-13 * (1.0 + std::abs(fx)) || norm3(gn) < norm3(gr)) {
        if (fn <= fx + 1e-9 * (1.0 + std::abs(fx))) {
          x = xn;
          fx = fn;
          gr = gn;
          moved = true;
          break;
        }
      }
    }
    if (!moved) break;
  }

  const double gnorm = norm3(gr);
  const double sigma = ml.sigma * std::exp(x[1]);
  const AltParams params{ml.mu + ml.sigma * x[0], sigma, x[2]};
  const Codelength len{fx + (n - 1.0) * std::log(ml.sigma)};
  if (!(gnorm < 1e-6))
    throw ConvergenceError("fit_alt: gradient norm " + std::to_string(gnorm) + " above 1e-6",
                           {params.mu, params.sigma, params.delta}, len.nats);
  return AltFit{len, params, gnorm, iters};
}

double bayes_factor(const TwoSampleData& data, const EffectSizePrior& prior) {
  const auto st = ttest_stats(data);
  const double nu = st.nu;
  const double root_nd = std::sqrt(st.n_delta);
  const double t = st.t;

  auto integrand = [&](double delta) {
    return noncentral_t_pdf(t, nu, root_nd * delta) * student_t_pdf(delta, prior.df, prior.location, prior.scale);
  };

  // As a function of delta the likelihood is close to Gaussian around
  // t / sqrt(n_delta), with sd about sqrt(1 + t^2 / nu) / sqrt(n_delta). Beyond
  // 40 sd it is below exp(-800) and is dropped. Breakpoints at the peak, its
  // shoulders and the prior location let the adaptive rule see every feature.
  const double centre = t / root_nd;
  const double sd = std::sqrt(1.0 + t * t / nu) / root_nd;
  const double lo = centre - 40.0 * sd, hi = centre + 40.0 * sd;
  std::vector<double> cuts{lo, centre - 4.0 * sd, centre, centre + 4.0 * sd, hi};
  if (prior.location > lo && prior.location < hi) cuts.push_back(prior.location);
  std::sort(cuts.begin(), cuts.end());
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0, err_total = 0.0, l1_total = 0.0;
  try {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      double err = 0.0, l1 = 0.0;
      total += GK::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-10, &err, &l1);
      err_total += err;
      l1_total += l1;
    }
  } catch (const std::exception& e) {
    throw NumericalError(std::string("bayes_factor: quadrature failed: ") + e.what());
  }
  if (!(total > 0.0) || err_total > 1e-8 * l1_total)
    throw NumericalError("bayes_factor: quadrature error estimate above 1e-8 relative");
  return total / noncentral_t_pdf(t, nu, 0.0);
}

TTestReport ttest(const TwoSampleData& data, const TTestOptions& opts) {
  TTestReport rep;
  rep.stats = ttest_stats(data);
  auto [i0, null_params] = null_codelength(data, opts.range);
  const AltFit alt = fit_alt(data, opts.prior, opts.range);
  rep.null_params = null_params;
  rep.alt_params = alt.params;
  rep.ml_params = ml_alt_estimates(data);
  rep.result.null_codelength = i0;
  rep.result.alt_codelength = alt.codelength;
  rep.result.difference_nats = posterior_log_odds(i0, alt.codelength);
  rep.result.selected = decide(i0, alt.codelength, opts.threshold_nats);
  if (opts.with_bayes_factor) rep.result.bayes_factor = bayes_factor(data, opts.prior);
  return rep;
}

}  // namespace mml
