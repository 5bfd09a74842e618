#include "dcp/count_sample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dcp {

CountSample::CountSample(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty())
    throw std::invalid_argument("CountSample: sample must be nonempty");

  std::map<std::int64_t, std::int64_t> hist;
  double sum = 0.0;
  for (const std::int64_t y : counts_) {
    if (y < 0)
      throw std::invalid_argument("CountSample: counts must be nonnegative");
    ++hist[y];
    sum += static_cast<double>(y);
  }
  histogram_.assign(hist.begin(), hist.end());
  if (!hist.empty() && hist.begin()->first == 0)
    zero_count_ = static_cast<std::size_t>(hist.begin()->second);

  const double n = static_cast<double>(counts_.size());
  mean_ = sum / n;
  double ss = 0.0;
  for (const auto& [value, mult] : histogram_) {
    const double d = static_cast<double>(value) - mean_;
    ss += static_cast<double>(mult) * d * d;
  }
  variance_ = ss / n;
}

std::int64_t CountSample::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error("CountSample::quantile: q must lie in [0, 1]");
  const double target = q * static_cast<double>(counts_.size());
  std::int64_t rank = 0;
  for (const auto& [value, mult] : histogram_) {
    rank += mult;
    if (static_cast<double>(rank) >= target) return value;
  }
  return histogram_.back().first;
}

}  // namespace dcp
