#ifndef DCP_DISCRETE_HPP
#define DCP_DISCRETE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dcp/composite.hpp"

// Survival discretization of the composite model: P(Y=y) = S_X(y) - S_X(y+1),
// so S_Y(y) = S_X(y) exactly and the discrete variable inherits the Pareto
// tail. Moments exist iff alpha > order (tail index rule).

namespace dcp {

enum class MomentMethod { ClosedFormZeta, TruncatedSum, Divergent };

struct MomentReport {
  int order = 0;
  bool exists = false;
  std::optional<double> value;  // present iff exists
  MomentMethod method = MomentMethod::Divergent;
};

class DiscreteComposite {
 public:
  explicit DiscreteComposite(CompositeParams params) : p_(std::move(params)) {}

  const CompositeParams& params() const { return p_; }

  // P(Y = y). The survival difference S_X(y) - S_X(y+1), grouped per
  // branch so no catastrophic cancellation occurs in either tail.
  double pmf(std::int64_t y) const;

  // ln P(Y = y), evaluated in log space; -inf when the mass underflows.
  double log_pmf(std::int64_t y) const;

  // P(Y <= y) = 1 - S_X(y+1).
  double cdf(std::int64_t y) const;

  // P(Y >= y) = S_X(y) exactly.
  double sf(std::int64_t y) const;

  // Smallest y with cdf(y) >= q, 0 <= q < 1. Analytic inversion of the
  // Pareto branch in the tail, integer bisection in the head.
  std::int64_t quantile(double q) const;

  // n inverse-CDF draws from a seeded deterministic generator.
  std::vector<std::int64_t> sample(std::uint64_t seed, std::size_t n) const;

  // n-th moment with existence guard (divergent when alpha <= order).
  MomentReport moment(int order) const;

  // P(Y = 0).
  double prob_zero() const { return pmf(0); }

  // sum_{y=0..y_max} y^order pmf(y), term by term. Used for the moment
  // divergence witnesses; deliberately has no tail completion.
  double partial_moment_sum(int order, std::int64_t y_max) const;

 private:
  double head_interval_mass(double a, double b) const;   // b <= theta
  double tail_interval_mass(double a, double b) const;   // a >= theta
  double straddle_mass(double a, double b) const;        // a < theta < b

  CompositeParams p_;
};

}  // namespace dcp

#endif
