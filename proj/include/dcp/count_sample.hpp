#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace dcp {

// A sample of nonnegative integer counts plus the derived summaries the
// likelihood code keeps reaching for. The (value, multiplicity) histogram
// lets log-likelihoods loop over distinct values instead of raw
// observations, which matters for daily case series full of repeats.
class CountSample {
 public:
  explicit CountSample(std::vector<std::int64_t> counts);

  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::size_t n() const { return counts_.size(); }
  std::size_t zero_count() const { return zero_count_; }

  // Distinct values in increasing order with their multiplicities.
  const std::vector<std::pair<std::int64_t, std::int64_t>>& histogram() const {
    return histogram_;
  }

  std::int64_t max() const { return histogram_.back().first; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }  // population (1/n) variance

  // Empirical quantile (lower, type-1): smallest order statistic with
  // rank >= q * n.
  std::int64_t quantile(double q) const;

 private:
  std::vector<std::int64_t> counts_;
  std::vector<std::pair<std::int64_t, std::int64_t>> histogram_;
  std::size_t zero_count_ = 0;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

}  // namespace dcp
