#include "dcp/heads.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dcp/specfun.hpp"

namespace dcp {

namespace {

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

double LognormalHead::pdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double z = (std::log(x) - mu) / sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma * x);
}

double LognormalHead::log_pdf(double x) const {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  const double lx = std::log(x);
  const double z = (lx - mu) / sigma;
  return -0.5 * z * z - kLogSqrt2Pi - std::log(sigma) - lx;
}

double LognormalHead::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return std_normal_cdf((std::log(x) - mu) / sigma);
}

double LognormalHead::sf(double x) const {
  if (x <= 0.0) return 1.0;
  return std_normal_sf((std::log(x) - mu) / sigma);
}

double WeibullHead::pdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double r = x / scale;
  return (shape / scale) * std::pow(r, shape - 1.0) * std::exp(-std::pow(r, shape));
}

double WeibullHead::log_pdf(double x) const {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  const double lr = std::log(x / scale);
  return std::log(shape / scale) + (shape - 1.0) * lr - std::exp(shape * lr);
}

double WeibullHead::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-std::pow(x / scale, shape));
}

double WeibullHead::sf(double x) const {
  if (x <= 0.0) return 1.0;
  return std::exp(-std::pow(x / scale, shape));
}

HeadKind head_kind(const HeadModel& head) {
  return std::holds_alternative<LognormalHead>(head) ? HeadKind::Lognormal
                                                     : HeadKind::Weibull;
}

std::string_view head_kind_name(HeadKind kind) {
  return kind == HeadKind::Lognormal ? "lognormal" : "weibull";
}

HeadModel make_lognormal_head(double mu, double sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0.0)
    throw std::invalid_argument("lognormal head: sigma must be finite and > 0");
  return LognormalHead{mu, sigma};
}

HeadModel make_weibull_head(double shape, double scale) {
  if (!std::isfinite(shape) || shape <= 0.0 || !std::isfinite(scale) || scale <= 0.0)
    throw std::invalid_argument("weibull head: shape and scale must be finite and > 0");
  return WeibullHead{shape, scale};
}

double head_pdf(const HeadModel& head, double x) {
  return std::visit([x](const auto& h) { return h.pdf(x); }, head);
}

double head_log_pdf(const HeadModel& head, double x) {
  return std::visit([x](const auto& h) { return h.log_pdf(x); }, head);
}

double head_cdf(const HeadModel& head, double x) {
  return std::visit([x](const auto& h) { return h.cdf(x); }, head);
}

double head_sf(const HeadModel& head, double x) {
  return std::visit([x](const auto& h) { return h.sf(x); }, head);
}

}  // namespace dcp
