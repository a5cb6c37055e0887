#include "locrank/edf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locrank {

long long robust_ceil(double x) {
  const double rounded = std::nearbyint(x);
  if (std::abs(x - rounded) <= 1e-9 * std::max(1.0, std::abs(x)))
    return static_cast<long long>(rounded);
  return static_cast<long long>(std::ceil(x));
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> scores)
    : sorted_(std::move(scores)) {
  if (sorted_.empty())
    throw std::invalid_argument("EmpiricalDistribution: empty sample");
  for (double s : sorted_)
    if (!std::isfinite(s))
      throw std::invalid_argument("EmpiricalDistribution: non-finite score");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

std::size_t EmpiricalDistribution::order_index(double v) const {
  if (!(v > 0.0) || v > 1.0)
    throw std::invalid_argument("quantile level must lie in (0,1]");
  const long long k = robust_ceil(v * static_cast<double>(sorted_.size()));
  const long long clamped =
      std::max(1LL, std::min<long long>(k, static_cast<long long>(sorted_.size())));
  return static_cast<std::size_t>(clamped);
}

double EmpiricalDistribution::quantile(double v) const {
  return sorted_[order_index(v) - 1];
}

}  // namespace locrank
