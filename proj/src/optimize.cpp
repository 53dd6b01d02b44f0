#include "mml/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mml {

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, std::span<const double> steps,
                           const NelderMeadOptions& opts) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<double>> pts(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += steps[i];

  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  std::vector<double> vals(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  MinimizeResult res;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

    double diam = 0.0;
    for (std::size_t i = 0; i <= dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) diam = std::max(diam, std::abs(pts[i][j] - pts[best][j]));
    const double spread = vals[worst] - vals[best];
    if (diam <= opts.x_tol || (spread <= opts.f_tol * (1.0 + std::abs(vals[best])) && diam <= 1e3 * opts.x_tol)) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j] / dim;

    auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
    };

    along(-1.0, trial);
    const double fr = eval(trial);
    if (fr < vals[best]) {
      along(-2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        vals[worst] = fe;
      } else {
        pts[worst] = trial;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = trial;
      vals[worst] = fr;
      continue;
    }
    // Contraction, outside or inside.
    const bool outside = fr < vals[worst];
    along(outside ? -0.5 : 0.5, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      vals[i] = eval(pts[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.x = pts[best];
  res.value = vals[best];
  res.iterations = it;
  return res;
}

}  // namespace mml
