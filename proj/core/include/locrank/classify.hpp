#pragma once

#include <cstddef>
#include <span>

#include "locrank/rate.hpp"

namespace locrank {

/// Mass-constrained empirical classification risk: the plug-in threshold is
/// the empirical (1-u0)-quantile of the scores.
struct MassConstrainedRisk {
  double l_hat = 0.0;              // error fraction, n * l_hat is an integer
  double q_hat = 0.0;              // empirical quantile used as threshold
  std::size_t positive_count = 0;  // #{i : s_i >= q_hat}
};

/// L_hat = (1/n) #{i : Y_i (s_i - q_hat) < 0} with q_hat the empirical
/// (1-u0)-quantile. The inequality is strict, so a point exactly at the
/// threshold never counts as an error.
MassConstrainedRisk hat_L(std::span<const double> scores,
                          std::span<const int> labels, Rate u0);

/// Same indicator sum with a fixed, caller-supplied threshold.
double L_fixed_threshold(std::span<const double> scores,
                         std::span<const int> labels, double q);

/// K_hat(s,v) = (1/n) sum_i Y_i I{s_i <= Qhat(s,v)}, v in (0,1].
double hat_K(std::span<const double> scores, std::span<const int> labels,
             double v);

/// K_hat computed through its signed-rank representation: with Z_i = Y_i s_i
/// and all scores positive and distinct, sum sgn(Z_i) over the i whose rank
/// of |Z_i| is <= ceil(n*v), divided by n. The rank cutoff is chosen so this
/// equals hat_K exactly. Tied or nonpositive scores are rejected.
double hat_K_via_signed_ranks(std::span<const double> scores,
                              std::span<const int> labels, double v);

/// Population quantities for a fixed (s, v), supplied by the oracle module.
/// Kept as parameters so the estimator side never mixes with ground truth.
struct PopulationPoint {
  double k = 0.0;        // K(s,v)
  double k_prime = 0.0;  // dK/dv at v
  double q = 0.0;        // Q(s,v), true quantile
};

/// Leading centered term of the Hoeffding-type decomposition:
/// Z_n = (1/n) sum_i (Y_i - K') I{s_i <= Q} - K + v K'.
double z_term(std::span<const double> scores, std::span<const int> labels,
              double v, const PopulationPoint& pop);

/// Asymptotic variance of sqrt(n) Z_n:
/// sigma^2 = v - K^2 + v(1-v) K'^2 - 2(1-v) K' K. Throws if the result is
/// negative, which cannot happen for consistent oracle inputs.
double sigma_sq(double v, double k, double k_prime);

/// Remainder Lambda_n = K_hat - K - Z_n (identically, by definition).
double lambda_remainder(std::span<const double> scores,
                        std::span<const int> labels, double v,
                        const PopulationPoint& pop);

/// One replication of the decomposition, all terms together.
struct DecompositionSample {
  double k_hat = 0.0;
  double k_true = 0.0;
  double k_prime_true = 0.0;
  double z_n = 0.0;
  double lambda_n = 0.0;  // = k_hat - k_true - z_n
  double sigma_sq = 0.0;
};

DecompositionSample decompose(std::span<const double> scores,
                              std::span<const int> labels, double v,
                              const PopulationPoint& pop);

}  // namespace locrank
