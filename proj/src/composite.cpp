#include "dcp/composite.hpp"

#include <cmath>
#include <limits>

namespace dcp {

double compute_phi(const HeadModel& head, double alpha, double theta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("compute_phi: alpha must be finite and > 0");
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("compute_phi: theta must be finite and > 0");
  const double g1 = head_cdf(head, theta);
  if (g1 <= 0.0)
    throw DegenerateHeadError("compute_phi: head CDF underflows to 0 at theta");
  return theta * head_pdf(head, theta) / (alpha * g1);
}

CompositeParams::CompositeParams(HeadModel head, double alpha, double theta)
    : head_(std::move(head)), alpha_(alpha), theta_(theta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("CompositeParams: alpha must be finite and > 0");
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("CompositeParams: theta must be finite and > 0");

  g1_theta_ = head_cdf(head_, theta_);
  if (g1_theta_ <= 0.0)
    throw DegenerateHeadError("CompositeParams: head CDF underflows to 0 at theta");

  // phi in log space; the direct product can spuriously under/overflow
  // while the log stays representable.
  log_phi_ = std::log(theta_) + head_log_pdf(head_, theta_) - std::log(alpha_) -
             std::log(g1_theta_);
  phi_ = std::exp(log_phi_);
  if (!std::isfinite(phi_) || phi_ <= 0.0)
    throw DegenerateHeadError("CompositeParams: weight phi leaves (0, inf)");

  // Logistic split of the unit mass: head 1/(1+phi), tail phi/(1+phi).
  w_tail_ = 1.0 / (1.0 + std::exp(-log_phi_));
  w_head_ = 1.0 / (1.0 + phi_);
  log_w_tail_ = -std::log1p(std::exp(-log_phi_));
  log_w_head_ = -std::log1p(phi_);
}

double composite_pdf(const CompositeParams& p, double x) {
  if (!(x > 0.0)) throw std::domain_error("composite_pdf: x must be > 0");
  if (x <= p.theta())
    return p.head_weight() * head_pdf(p.head(), x) / p.head_cdf_theta();
  return p.tail_weight() * p.alpha() *
         std::exp(p.alpha() * std::log(p.theta() / x)) / x;
}

double composite_cdf(const CompositeParams& p, double x) {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("composite_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x <= p.theta())
    return p.head_weight() * head_cdf(p.head(), x) / p.head_cdf_theta();
  // 1/(1+phi) + phi/(1+phi) [1 - (theta/x)^alpha]
  return p.head_weight() +
         p.tail_weight() * -std::expm1(p.alpha() * std::log(p.theta() / x));
}

double composite_sf(const CompositeParams& p, double x) {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("composite_sf: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x <= p.theta()) {
    // 1 - w_h G1(x)/G1(theta) regrouped into nonnegative addends:
    // w_tail + w_head (G1(theta) - G1(x)) / G1(theta).
    const double g1t = p.head_cdf_theta();
    const double diff = g1t > 0.5
                            ? head_sf(p.head(), x) - head_sf(p.head(), p.theta())
                            : g1t - head_cdf(p.head(), x);
    return p.tail_weight() + p.head_weight() * (diff > 0.0 ? diff / g1t : 0.0);
  }
  return p.tail_weight() * std::exp(p.alpha() * std::log(p.theta() / x));
}

}  // namespace dcp
