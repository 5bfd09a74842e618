#pragma once

#include "dcp/count_sample.hpp"
#include "dcp/fit.hpp"

namespace dcp {

// Likelihood-ratio test of the Pareto tail index against an upper boundary
// (1: infinite mean, 2: infinite variance). The null region is {alpha <=
// boundary_c}; when the unconstrained estimate already lies inside it the
// statistic is exactly 0 and the p-value exactly 1.
struct LrtResult {
  double boundary_c = 0.0;
  double lambda = 0.0;       // 2 * (unconstrained - constrained loglik), >= 0
  double p_value = 1.0;      // chi-square(1) reference
  double p_value_mixture = 1.0;  // boundary-aware 50:50 chi2(0)/chi2(1) mix
  FitResult unconstrained;
  FitResult constrained;
  bool reject_at_005 = false;
};

LrtResult lrt_tail_index(Family family, const CountSample& sample,
                         double boundary_c, const FitConfig& config);

struct LrtReport {
  LrtResult infinite_mean;      // boundary_c = 1
  LrtResult infinite_variance;  // boundary_c = 2
};

// Runs both boundary tests off a single shared unconstrained fit and
// enforces nestedness (the c=2 constrained optimum is never worse than
// the c=1 one, since its feasible region contains it).
LrtReport lrt_report(Family family, const CountSample& sample,
                     const FitConfig& config);

}  // namespace dcp
