#include "locrank/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "locrank/edf.hpp"

namespace locrank {

namespace {

void check_sample(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) throw std::invalid_argument("empty sample");
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores/labels size mismatch");
}

/// ceil(n*v)-th order statistic without sorting the whole sample.
double order_statistic(std::span<const double> scores, double v) {
  if (!(v > 0.0) || v > 1.0)
    throw std::invalid_argument("quantile level must lie in (0,1]");
  const long long n = static_cast<long long>(scores.size());
  long long k = robust_ceil(v * static_cast<double>(n));
  k = std::max(1LL, std::min(k, n));
  std::vector<double> scratch(scores.begin(), scores.end());
  std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end());
  return scratch[k - 1];
}

}  // namespace

MassConstrainedRisk hat_L(std::span<const double> scores,
                          std::span<const int> labels, Rate u0) {
  check_sample(scores, labels);
  const double q = order_statistic(scores, u0.v0());
  MassConstrainedRisk out;
  out.q_hat = q;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (static_cast<double>(labels[i]) * (scores[i] - q) < 0.0) ++errors;
    if (scores[i] >= q) ++out.positive_count;
  }
  out.l_hat = static_cast<double>(errors) / static_cast<double>(scores.size());
  return out;
}

double L_fixed_threshold(std::span<const double> scores,
                         std::span<const int> labels, double q) {
  check_sample(scores, labels);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (static_cast<double>(labels[i]) * (scores[i] - q) < 0.0) ++errors;
  return static_cast<double>(errors) / static_cast<double>(scores.size());
}

double hat_K(std::span<const double> scores, std::span<const int> labels,
             double v) {
  check_sample(scores, labels);
  const double q = order_statistic(scores, v);
  long long signed_count = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] <= q) signed_count += labels[i];
  return static_cast<double>(signed_count) / static_cast<double>(scores.size());
}

double hat_K_via_signed_ranks(std::span<const double> scores,
                              std::span<const int> labels, double v) {
  check_sample(scores, labels);
  if (!(v > 0.0) || v > 1.0)
    throw std::invalid_argument("quantile level must lie in (0,1]");
  // Z_i = Y_i s_i; positivity makes |Z_i| = s_i and sgn(Z_i) = Y_i,
  // distinctness makes the ranks unambiguous.
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (!(scores[idx[r]] > 0.0))
      throw std::invalid_argument("signed-rank form needs strictly positive scores");
    if (r > 0 && scores[idx[r]] == scores[idx[r - 1]])
      throw std::invalid_argument("signed-rank form needs distinct scores");
  }
  const long long n = static_cast<long long>(scores.size());
  long long cutoff = robust_ceil(v * static_cast<double>(n));
  cutoff = std::max(1LL, std::min(cutoff, n));
  long long signed_count = 0;
  for (long long r = 0; r < cutoff; ++r)
    signed_count += labels[idx[static_cast<std::size_t>(r)]];
  return static_cast<double>(signed_count) / static_cast<double>(n);
}

double z_term(std::span<const double> scores, std::span<const int> labels,
              double v, const PopulationPoint& pop) {
  check_sample(scores, labels);
  double acc = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] <= pop.q)
      acc += static_cast<double>(labels[i]) - pop.k_prime;
  acc /= static_cast<double>(scores.size());
  return acc - pop.k + v * pop.k_prime;
}

double sigma_sq(double v, double k, double k_prime) {
  if (!(v > 0.0) || v > 1.0)
    throw std::invalid_argument("sigma_sq: v must lie in (0,1]");
  const double value =
      v - k * k + v * (1.0 - v) * k_prime * k_prime - 2.0 * (1.0 - v) * k_prime * k;
  if (value < 0.0)
    throw std::domain_error("sigma_sq: negative value, oracle inputs inconsistent");
  return value;
}

double lambda_remainder(std::span<const double> scores,
                        std::span<const int> labels, double v,
                        const PopulationPoint& pop) {
  return hat_K(scores, labels, v) - pop.k - z_term(scores, labels, v, pop);
}

DecompositionSample decompose(std::span<const double> scores,
                              std::span<const int> labels, double v,
                              const PopulationPoint& pop) {
  DecompositionSample out;
  out.k_hat = hat_K(scores, labels, v);
  out.k_true = pop.k;
  out.k_prime_true = pop.k_prime;
  out.z_n = z_term(scores, labels, v, pop);
  out.lambda_n = out.k_hat - out.k_true - out.z_n;
  out.sigma_sq = sigma_sq(v, pop.k, pop.k_prime);
  return out;
}

}  // namespace locrank
