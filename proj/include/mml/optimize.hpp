#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mml {

struct NelderMeadOptions {
  int max_iterations = 20000;
  double x_tol = 1e-11;  // simplex diameter
  double f_tol = 1e-14;  // spread of function values
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex from x0 with per-coordinate initial steps. Never throws on
/// non-convergence; the caller inspects `converged`.
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, std::span<const double> steps,
                           const NelderMeadOptions& opts = {});

}  // namespace mml
