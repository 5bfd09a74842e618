#ifndef DCP_HEADS_HPP
#define DCP_HEADS_HPP

#include <string_view>
#include <variant>

// Head distributions for the composite models: a head supplies pdf/CDF
// evaluation on (0, theta]. Adding a head means adding a struct with the
// same member set and extending the HeadModel variant.

namespace dcp {

// Lognormal head: g1(x) = 1/(sqrt(2 pi) sigma x) exp(-(ln x - mu)^2 / (2 sigma^2)).
struct LognormalHead {
  double mu = 0.0;
  double sigma = 1.0;  // > 0

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;  // Phi((ln x - mu)/sigma); 0 at x = 0
  double sf(double x) const;
};

// Weibull head: G1(x) = 1 - exp(-(x/scale)^shape).
struct WeibullHead {
  double shape = 1.0;  // a > 0
  double scale = 1.0;  // sigma > 0

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double sf(double x) const;
};

using HeadModel = std::variant<LognormalHead, WeibullHead>;

enum class HeadKind { Lognormal, Weibull };

HeadKind head_kind(const HeadModel& head);
std::string_view head_kind_name(HeadKind kind);

// Validating factories; throw std::invalid_argument on nonpositive
// sigma/shape/scale or non-finite inputs.
HeadModel make_lognormal_head(double mu, double sigma);
HeadModel make_weibull_head(double shape, double scale);

double head_pdf(const HeadModel& head, double x);
double head_log_pdf(const HeadModel& head, double x);
double head_cdf(const HeadModel& head, double x);
double head_sf(const HeadModel& head, double x);

}  // namespace dcp

#endif
