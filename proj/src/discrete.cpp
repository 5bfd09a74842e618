#include "dcp/discrete.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dcp/specfun.hpp"

namespace dcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// Mass of (a, b] inside the head region, b <= theta:
// [G1(b) - G1(a)] / ((1+phi) G1(theta)). The CDF difference switches to
// the survival flank once past the head median so it keeps relative
// accuracy on both sides.
double DiscreteComposite::head_interval_mass(double a, double b) const {
  const auto& head = p_.head();
  const double diff = head_cdf(head, a) > 0.5
                          ? head_sf(head, a) - head_sf(head, b)
                          : head_cdf(head, b) - head_cdf(head, a);
  if (diff <= 0.0) return 0.0;
  return p_.head_weight() * diff / p_.head_cdf_theta();
}

// Mass of (a, b] inside the Pareto region, theta <= a < b:
// w_t theta^alpha (a^-alpha - b^-alpha), with the bracket expanded as
// a^-alpha (1 - (a/b)^alpha) so large a keeps relative accuracy.
double DiscreteComposite::tail_interval_mass(double a, double b) const {
  const double alpha = p_.alpha();
  const double lead = std::exp(alpha * std::log(p_.theta() / a));
  return p_.tail_weight() * lead * -std::expm1(-alpha * std::log(b / a));
}

// Mass of the bin that straddles the splice point, a < theta < b:
// w_h [G1(theta) - G1(a)]/G1(theta) + w_t [1 - (theta/b)^alpha].
double DiscreteComposite::straddle_mass(double a, double b) const {
  const auto& head = p_.head();
  const double g1t = p_.head_cdf_theta();
  const double diff = head_cdf(head, a) > 0.5
                          ? head_sf(head, a) - head_sf(head, p_.theta())
                          : g1t - head_cdf(head, a);
  const double head_part = diff > 0.0 ? p_.head_weight() * diff / g1t : 0.0;
  const double tail_part =
      p_.tail_weight() * -std::expm1(p_.alpha() * std::log(p_.theta() / b));
  return head_part + tail_part;
}

double DiscreteComposite::pmf(std::int64_t y) const {
  if (y < 0) throw std::domain_error("pmf: y must be a nonnegative integer");
  const double a = static_cast<double>(y);
  const double b = a + 1.0;
  const double theta = p_.theta();
  if (b <= theta) return head_interval_mass(a, b);
  if (a >= theta) return tail_interval_mass(a, b);
  return straddle_mass(a, b);
}

double DiscreteComposite::log_pmf(std::int64_t y) const {
  if (y < 0) throw std::domain_error("log_pmf: y must be a nonnegative integer");
  const double a = static_cast<double>(y);
  const double b = a + 1.0;
  const double theta = p_.theta();
  if (a >= theta) {
    // Fully in the tail: assemble in log space, immune to underflow of
    // the tiny bin masses far out.
    const double alpha = p_.alpha();
    const double bracket = -std::expm1(-alpha * std::log(b / a));
    return p_.log_tail_weight() + alpha * std::log(theta / a) + std::log(bracket);
  }
  const double mass = b <= theta ? head_interval_mass(a, b) : straddle_mass(a, b);
  return mass > 0.0 ? std::log(mass) : -kInf;
}

double DiscreteComposite::cdf(std::int64_t y) const {
  if (y < 0) throw std::domain_error("cdf: y must be a nonnegative integer");
  return 1.0 - composite_sf(p_, static_cast<double>(y) + 1.0);
}

double DiscreteComposite::sf(std::int64_t y) const {
  if (y < 0) throw std::domain_error("sf: y must be a nonnegative integer");
  return composite_sf(p_, static_cast<double>(y));
}

std::int64_t DiscreteComposite::quantile(double q) const {
  if (!(q >= 0.0) || q >= 1.0)
    throw std::domain_error("quantile: q must lie in [0, 1)");

  // Smallest integer whose bin (y, y+1] is governed by the Pareto branch.
  const std::int64_t tail_start = static_cast<std::int64_t>(std::floor(p_.theta()));

  std::int64_t y;
  if (q < cdf(tail_start)) {
    // Head region: integer bisection for the smallest y with cdf(y) >= q.
    std::int64_t lo = 0, hi = tail_start;
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (cdf(mid) >= q)
        hi = mid;
      else
        lo = mid + 1;
    }
    y = lo;
  } else {
    // Invert the Pareto survival branch: cdf(y) >= q iff
    // y + 1 >= theta (w_t / (1-q))^(1/alpha).
    const double target =
        p_.theta() * std::pow(p_.tail_weight() / (1.0 - q), 1.0 / p_.alpha());
    if (target > 9.0e18)
      throw std::overflow_error("quantile: value exceeds the 64-bit range");
    y = static_cast<std::int64_t>(std::ceil(target - 1.0));
    if (y < tail_start) y = tail_start;
  }

  // Absorb floating-point slop around the boundary.
  while (cdf(y) < q) ++y;
  while (y > 0 && cdf(y - 1) >= q) --y;
  return y;
}

std::vector<std::int64_t> DiscreteComposite::sample(std::uint64_t seed,
                                                    std::size_t n) const {
  if (n == 0) throw std::domain_error("sample: n must be >= 1");
  std::mt19937_64 eng(seed);
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // 53-bit uniform in [0, 1); bypasses std::uniform_real_distribution,
    // whose stream is implementation-defined.
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    out.push_back(quantile(u));
  }
  return out;
}

MomentReport DiscreteComposite::moment(int order) const {
  if (order < 1) throw std::domain_error("moment: order must be >= 1");
  const double alpha = p_.alpha();
  const double theta = p_.theta();

  MomentReport report;
  report.order = order;
  if (alpha <= static_cast<double>(order)) {
    report.exists = false;
    report.method = MomentMethod::Divergent;
    return report;
  }
  report.exists = true;

  const double tail_scale =
      p_.tail_weight() * std::exp(alpha * std::log(theta));  // w_t theta^alpha

  if (order == 1 && theta <= 1.0) {
    report.method = MomentMethod::ClosedFormZeta;
    report.value = tail_scale * riemann_zeta(alpha);
    return report;
  }

  // E[Y^n] = sum_{y>=1} [y^n - (y-1)^n] S_Y(y) (summation by parts;
  // the boundary term vanishes because alpha > n). Head-region terms are
  // summed explicitly; from M = ceil(theta) on, S_Y(y) is the pure Pareto
  // power and the remainder collapses to zeta tail sums:
  //   sum_{y>=M} [y^n - (y-1)^n] y^-alpha
  //     = sum_{k=0}^{n-1} C(n,k) (-1)^(n-1-k) zeta_tail(alpha - k, M).
  report.method = MomentMethod::TruncatedSum;
  const std::int64_t m = static_cast<std::int64_t>(std::ceil(theta));
  const double n = static_cast<double>(order);
  double sum = 0.0;
  for (std::int64_t y = 1; y < m; ++y) {
    const double yd = static_cast<double>(y);
    sum += (std::pow(yd, n) - std::pow(yd - 1.0, n)) * sf(y);
  }
  double binom = 1.0;  // C(n, k), grown incrementally from k = 0
  double sign = (order % 2 == 0) ? -1.0 : 1.0;
  double tail = 0.0;
  for (int k = 0; k < order; ++k) {
    if (k > 0) {
      binom = binom * static_cast<double>(order - k + 1) / static_cast<double>(k);
      sign = -sign;
    }
    tail += sign * binom * zeta_tail(alpha - static_cast<double>(k),
                                     m > 1 ? m : 1);
  }
  report.value = sum + tail_scale * tail;
  return report;
}

double DiscreteComposite::partial_moment_sum(int order,
                                             std::int64_t y_max) const {
  if (order < 1) throw std::domain_error("partial_moment_sum: order must be >= 1");
  if (y_max < 0) throw std::domain_error("partial_moment_sum: y_max must be >= 0");
  double sum = 0.0;
  for (std::int64_t y = 1; y <= y_max; ++y)
    sum += std::pow(static_cast<double>(y), static_cast<double>(order)) * pmf(y);
  return sum;
}

}  // namespace dcp
