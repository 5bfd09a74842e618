#pragma once

#include <functional>
#include <vector>

namespace dcp {

struct NelderMeadOptions {
  double ftol = 1e-10;      // function-value spread across the simplex
  double xtol = 1e-8;       // per-coordinate simplex diameter (relative)
  int max_iters = 5000;
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fmin = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Downhill-simplex minimizer (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2). Objective values of NaN are treated as +infinity so the
// simplex backs away from infeasible regions instead of stalling.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opts = {});

}  // namespace dcp
