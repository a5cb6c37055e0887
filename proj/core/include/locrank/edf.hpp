#pragma once

#include <cstddef>
#include <vector>

namespace locrank {

/// Empirical cdf and generalized-inverse quantiles of a score sample.
/// Sorting happens once at construction; quantile lookups are O(1).
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> scores);

  /// F(t) = #{i : s_i <= t} / n. Exact count ratio, no interpolation.
  double cdf(double t) const;

  /// Generalized inverse F^{-1}(v) = inf{t : F(t) >= v} for v in (0,1],
  /// i.e. the ceil(n*v)-th order statistic. v <= 0 is rejected (the
  /// population generalized inverse would be -infinity there).
  double quantile(double v) const;

  /// 1-based order-statistic index ceil(n*v), with a small guard so that
  /// n*v values that are integers up to double rounding stay put.
  std::size_t order_index(double v) const;

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }

 private:
  std::vector<double> sorted_;
};

/// ceil(x) that forgives the few-ulp noise of products like n*(1-u0):
/// if x is within 1e-9 (relative) of an integer, that integer is returned.
long long robust_ceil(double x);

}  // namespace locrank
