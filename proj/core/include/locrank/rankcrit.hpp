#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locrank/rate.hpp"

namespace locrank {

/// One point of the ROC curve reparameterized by the top rate u:
/// threshold at the empirical (1-u)-quantile, rates conditioned on the label.
struct RocPoint {
  double u = 0.0;
  double alpha_hat = 0.0;  // #{Y=-1, s >= q} / n_-
  double beta_hat = 0.0;   // #{Y=+1, s >= q} / n_+
};

/// Exact pair counts behind the AUC-type statistics. All integers, so
/// identity tests can assert equality without floating error.
struct PairCounts {
  std::uint64_t concordant = 0;  // pos strictly above neg
  std::uint64_t tied = 0;        // equal scores, opposite labels
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

PairCounts pair_counts(std::span<const double> scores, std::span<const int> labels);

/// Rate of concording pairs, strict inequality; ties contribute zero.
/// Requires both classes present.
double hat_auc(std::span<const double> scores, std::span<const int> labels);

std::vector<RocPoint> roc_points(std::span<const double> scores,
                                 std::span<const int> labels,
                                 std::span<const double> u_grid);

/// Plug-in local AUC: pairs (i: Y=-1, j: Y=+1) with s_j > s_i and
/// s_j >= q_hat, normalized by n_+ n_-. The global flag drops the threshold
/// and reproduces hat_auc exactly.
double hat_locauc(std::span<const double> scores, std::span<const int> labels,
                  Rate u0);

/// Truncated AUC, computed from the rearranged identity
/// trunc = locauc - beta_hat + alpha_hat * beta_hat (exact by construction).
double trunc_auc(std::span<const double> scores, std::span<const int> labels,
                 Rate u0);

/// Local ranking error: ordered-pair sum over i != j of discordant pairs
/// whose scores both sit at or above the empirical quantile, normalized by
/// n(n-1). Each discordant unordered pair contributes twice.
double hat_R_local(std::span<const double> scores, std::span<const int> labels,
                   Rate u0);

/// Sum over i of rank(s_i) for Y_i = +1 (ranks 1..n, distinct scores only).
std::uint64_t positive_rank_sum(std::span<const double> scores,
                                std::span<const int> labels);

/// Wilcoxon statistic: sum of rank/(n+1) over positives. Tied scores are
/// rejected; no mid-rank convention is invented here.
double t_wilcoxon(std::span<const double> scores, std::span<const int> labels);

/// Truncated rank sum with score-generating function
/// Phi_{u0}(v) = v I{v > 1-u0}; the global flag keeps every rank.
double t_local(std::span<const double> scores, std::span<const int> labels,
               Rate u0);

/// M_hat = R_hat + (n_-/n) L_hat, the combined find-and-rank criterion.
double hat_M(std::span<const double> scores, std::span<const int> labels,
             Rate u0);

/// Every empirical statistic for one (scores, labels, u0) triple. Rank-based
/// fields stay empty when scores are tied. All fields except q_hat are
/// exactly invariant under strictly increasing score transforms.
struct CriterionReport {
  bool global = false;
  double u0 = 0.0;  // 1.0 when global
  double q_hat = 0.0;
  double l_hat = 0.0;
  double auc_hat = 0.0;
  double locauc_hat = 0.0;
  double trunc_auc_hat = 0.0;
  double r_local_hat = 0.0;
  std::optional<double> t_wilcoxon;
  std::optional<double> t_local;
  std::optional<double> w_hat;  // t_local / n_+
  double m_hat = 0.0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double p_hat = 0.0;  // n_+ / n

  /// Flat JSON object with the field names above; rank fields omitted when
  /// not computed, u0 serialized as "global" for the endpoint flag.
  std::string to_json() const;
};

CriterionReport full_report(std::span<const double> scores,
                            std::span<const int> labels, Rate u0);

/// CSV "u,alpha,beta,d_line" where d_line = p_hat*beta + (1-p_hat)*alpha.
std::string roc_csv(const std::vector<RocPoint>& points, double p_hat);

}  // namespace locrank
