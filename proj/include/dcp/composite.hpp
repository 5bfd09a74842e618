#ifndef DCP_COMPOSITE_HPP
#define DCP_COMPOSITE_HPP

#include <stdexcept>

#include "dcp/heads.hpp"

// Continuous weighted composite distribution: a parametric head on
// (0, theta] spliced to a Pareto(alpha, theta) tail on (theta, inf).
// Only the continuity condition at theta is imposed; it determines the
// mixing weight phi = theta g1(theta) / (alpha G1(theta)), which splits
// the mass as 1/(1+phi) head, phi/(1+phi) tail.

namespace dcp {

// G1(theta) underflowed to zero (or phi left the representable range):
// the head places no usable mass below the splice point.
class DegenerateHeadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The continuity-condition weight. Direct evaluation of
// theta * g1(theta) / (alpha * G1(theta)).
double compute_phi(const HeadModel& head, double alpha, double theta);

class CompositeParams {
 public:
  // Throws std::invalid_argument for nonpositive alpha/theta and
  // DegenerateHeadError when phi cannot be represented.
  CompositeParams(HeadModel head, double alpha, double theta);

  const HeadModel& head() const { return head_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }

  double phi() const { return phi_; }
  double log_phi() const { return log_phi_; }
  double head_weight() const { return w_head_; }      // 1/(1+phi)
  double tail_weight() const { return w_tail_; }      // phi/(1+phi)
  double log_head_weight() const { return log_w_head_; }
  double log_tail_weight() const { return log_w_tail_; }
  double head_cdf_theta() const { return g1_theta_; }  // G1(theta)

 private:
  HeadModel head_;
  double alpha_;
  double theta_;
  double g1_theta_;
  double phi_;
  double log_phi_;
  double w_head_;
  double w_tail_;
  double log_w_head_;
  double log_w_tail_;
};

// Density; throws std::domain_error for x <= 0.
double composite_pdf(const CompositeParams& p, double x);

// CDF on [0, inf): 0 at x = 0, 1/(1+phi) at theta, -> 1.
double composite_cdf(const CompositeParams& p, double x);

// Survival 1 - CDF, with the tail branch evaluated directly as
// (phi/(1+phi)) (theta/x)^alpha so extreme-x values keep relative accuracy.
double composite_sf(const CompositeParams& p, double x);

}  // namespace dcp

#endif
