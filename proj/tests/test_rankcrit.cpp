#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "brute.hpp"
#include "locrank/classify.hpp"
#include "locrank/edf.hpp"
#include "locrank/rankcrit.hpp"
#include "locrank/rng.hpp"

using namespace locrank;

namespace {

struct Sample {
  std::vector<double> scores;
  std::vector<int> labels;
};

Sample random_sample(RandomStream& rng, std::size_t n, bool force_two_classes) {
  Sample s;
  s.scores.resize(n);
  s.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.scores[i] = rng.uniform01();
    s.labels[i] = rng.bernoulli(0.5) ? 1 : -1;
  }
  if (force_two_classes && n >= 2) {
    s.labels[0] = 1;
    s.labels[1] = -1;
  }
  return s;
}

}  // namespace

TEST_CASE("hat_auc") {
  CHECK(hat_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                std::vector<int>{1, 1, -1, -1}) == 1.0);
  CHECK(hat_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                std::vector<int>{-1, -1, 1, 1}) == 0.0);
  CHECK(hat_auc(std::vector<double>{0.9, 0.2, 0.7, 0.1},
                std::vector<int>{1, 1, -1, -1}) == 0.75);
  CHECK_THROWS_AS(hat_auc(std::vector<double>{0.1, 0.2},
                          std::vector<int>{1, 1}),
                  std::invalid_argument);

  auto rng = child_stream(SeedSpec{31}, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 20);
    auto s = random_sample(rng, n, true);
    if (rng.bernoulli(0.3))  // inject ties
      for (double& x : s.scores) x = std::floor(x * 6.0) / 6.0;
    CHECK(hat_auc(s.scores, s.labels) == brute::auc(s.scores, s.labels));
  }
}

TEST_CASE("roc_points") {
  {
    // u close to 1 thresholds at the minimum
    const std::vector<double> scores{0.9, 0.7, 0.3, 0.1};
    const std::vector<int> labels{1, -1, 1, -1};
    const double u = 1.0 - 1.0 / 8.0;
    const auto pts = roc_points(scores, labels, std::vector<double>{u});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].alpha_hat == 1.0);
    CHECK(pts[0].beta_hat == 1.0);
  }
  {
    const std::vector<double> scores{0.9, 0.8, 0.2, 0.1};
    const std::vector<int> labels{1, 1, -1, -1};
    const auto pts = roc_points(scores, labels, std::vector<double>{0.5});
    CHECK(pts[0].alpha_hat == 0.0);
    CHECK(pts[0].beta_hat == 1.0);
  }
  {
    const std::vector<double> scores{0.9, 0.7, 0.3, 0.1};
    const std::vector<int> labels{1, -1, 1, -1};
    const auto pts = roc_points(scores, labels, std::vector<double>{0.5});
    CHECK(pts[0].alpha_hat == 0.5);
    CHECK(pts[0].beta_hat == 1.0);
  }
  CHECK(roc_points(std::vector<double>{0.1, 0.9}, std::vector<int>{-1, 1},
                   std::vector<double>{})
            .empty());

  // empirical D-line: (n+/n) beta + (n-/n) alpha counts the top set exactly
  auto rng = child_stream(SeedSpec{32}, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 30);
    auto s = random_sample(rng, n, true);
    const double u = rng.uniform(0.05, 0.95);
    const auto pts = roc_points(s.scores, s.labels, std::vector<double>{u});
    std::size_t pos = 0, neg = 0, top = 0;
    EmpiricalDistribution dist(s.scores);
    const double q = dist.quantile(1.0 - u);
    for (std::size_t i = 0; i < n; ++i) {
      (s.labels[i] == 1 ? pos : neg)++;
      if (s.scores[i] >= q) ++top;
    }
    const double lhs = (static_cast<double>(pos) / n) * pts[0].beta_hat +
                       (static_cast<double>(neg) / n) * pts[0].alpha_hat;
    CHECK(lhs == doctest::Approx(static_cast<double>(top) / n).epsilon(1e-12));
  }
}

TEST_CASE("hat_locauc") {
  const std::vector<double> scores{0.9, 0.2, 0.7, 0.1};
  const std::vector<int> labels{1, 1, -1, -1};
  CHECK(hat_locauc(scores, labels, Rate(0.5)) == 0.75);

  // global flag reproduces hat_auc exactly
  auto rng = child_stream(SeedSpec{33}, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 25);
    auto s = random_sample(rng, n, true);
    CHECK(hat_locauc(s.scores, s.labels, Rate::global()) ==
          hat_auc(s.scores, s.labels));
    const double u0 = rng.uniform(0.05, 0.95);
    CHECK(hat_locauc(s.scores, s.labels, Rate(u0)) ==
          brute::locauc(s.scores, s.labels, u0));
  }

  // all positives below the threshold: nothing qualifies
  CHECK(hat_locauc(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                   std::vector<int>{-1, -1, 1, 1}, Rate(0.5)) == 0.0);
}

TEST_CASE("trunc_auc identity and step-curve oracle") {
  const std::vector<double> scores{0.9, 0.2, 0.7, 0.1};
  const std::vector<int> labels{1, 1, -1, -1};
  CHECK(trunc_auc(scores, labels, Rate(0.5)) ==
        doctest::Approx(0.75 - 1.0 + 0.5).epsilon(1e-15));

  // the identity rearrangement equals the step integral exactly for
  // distinct scores, and within 1/(n+ n-) with ties
  auto rng = child_stream(SeedSpec{34}, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 25);
    auto s = random_sample(rng, n, true);
    const bool tied = rng.bernoulli(0.3);
    if (tied)
      for (double& x : s.scores) x = std::floor(x * 6.0) / 6.0;
    const double u0 = rng.uniform(0.05, 0.95);
    std::size_t pos = 0, neg = 0;
    for (int y : s.labels) (y == 1 ? pos : neg)++;
    const double slack =
        1.0 / (static_cast<double>(pos) * static_cast<double>(neg)) + 1e-12;
    CHECK(std::abs(trunc_auc(s.scores, s.labels, Rate(u0)) -
                   brute::trunc_step_integral(s.scores, s.labels, u0)) <= slack);
  }

  // global: alpha = beta = 1, so trunc equals the full AUC
  auto s = random_sample(rng, 12, true);
  CHECK(trunc_auc(s.scores, s.labels, Rate::global()) ==
        doctest::Approx(hat_auc(s.scores, s.labels)).epsilon(1e-15));
}

TEST_CASE("hat_R_local") {
  CHECK(hat_R_local(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                    std::vector<int>{1, 1, -1, -1}, Rate(0.5)) == 0.0);
  // one discordant unordered pair above the threshold: 2/12
  CHECK(hat_R_local(std::vector<double>{0.9, 0.7, 0.3, 0.1},
                    std::vector<int>{1, -1, 1, -1}, Rate(0.5)) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  // threshold above everything but the top point: no qualifying pair
  CHECK(hat_R_local(std::vector<double>{0.9, 0.7, 0.3, 0.1},
                    std::vector<int>{1, -1, 1, -1}, Rate(0.25)) == 0.0);
  CHECK_THROWS_AS(hat_R_local(std::vector<double>{0.5}, std::vector<int>{1},
                              Rate(0.5)),
                  std::invalid_argument);

  auto rng = child_stream(SeedSpec{35}, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 20);
    auto s = random_sample(rng, n, false);
    if (rng.bernoulli(0.3))
      for (double& x : s.scores) x = std::floor(x * 6.0) / 6.0;
    const double u0 = rng.uniform(0.05, 0.95);
    CHECK(hat_R_local(s.scores, s.labels, Rate(u0)) ==
          doctest::Approx(brute::r_local(s.scores, s.labels, u0)).epsilon(1e-14));
  }
}

TEST_CASE("t_wilcoxon and the corrected AUC relation") {
  const std::vector<double> scores{0.9, 0.7, 0.3, 0.1};
  CHECK(t_wilcoxon(scores, std::vector<int>{1, 1, -1, -1}) ==
        doctest::Approx(1.4).epsilon(1e-15));
  CHECK(t_wilcoxon(scores, std::vector<int>{-1, -1, -1, -1}) == 0.0);
  CHECK_THROWS_AS(t_wilcoxon(std::vector<double>{0.5, 0.5},
                             std::vector<int>{1, -1}),
                  std::invalid_argument);

  // (n+ n- AUC + n+(n+ + 1)/2) / (n+1) = T_n, exactly, as integers
  auto rng = child_stream(SeedSpec{36}, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 40);
    auto s = random_sample(rng, n, true);
    const auto counts = pair_counts(s.scores, s.labels);
    const std::uint64_t rank_sum = positive_rank_sum(s.scores, s.labels);
    CHECK(counts.concordant + counts.pos * (counts.pos + 1) / 2 == rank_sum);
  }
}

TEST_CASE("t_local") {
  const std::vector<double> scores{0.9, 0.7, 0.3, 0.1};
  const std::vector<int> labels{1, 1, -1, -1};
  CHECK(t_local(scores, labels, Rate(0.5)) == doctest::Approx(1.4).epsilon(1e-15));
  // u0 so small that no normalized rank clears 1 - u0
  CHECK(t_local(scores, labels, Rate(0.05)) == 0.0);
  // global keeps every rank
  auto rng = child_stream(SeedSpec{37}, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 20);
    auto s = random_sample(rng, n, true);
    CHECK(t_local(s.scores, s.labels, Rate::global()) ==
          t_wilcoxon(s.scores, s.labels));
  }
}

TEST_CASE("hat_M") {
  {
    // perfectly ranked with u0 = positive fraction: both components vanish
    const std::vector<double> scores{0.9, 0.8, 0.2, 0.1};
    const std::vector<int> labels{1, 1, -1, -1};
    CHECK(hat_M(scores, labels, Rate(0.5)) == 0.0);
  }
  {
    const std::vector<double> scores{0.9, 0.7, 0.3, 0.1};
    const std::vector<int> labels{1, -1, 1, -1};
    CHECK(hat_M(scores, labels, Rate(0.5)) ==
          doctest::Approx(7.0 / 24.0).epsilon(1e-15));
  }
}

TEST_CASE("full_report: consistency, global flag, exact invariance") {
  auto rng = child_stream(SeedSpec{38}, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform01() * 30);
    auto s = random_sample(rng, n, true);
    const double u0 = rng.uniform(0.05, 0.95);
    const Rate rate(u0);
    const auto rep = full_report(s.scores, s.labels, rate);

    // componentwise agreement
    CHECK(rep.auc_hat == hat_auc(s.scores, s.labels));
    CHECK(rep.locauc_hat == hat_locauc(s.scores, s.labels, rate));
    CHECK(rep.r_local_hat == hat_R_local(s.scores, s.labels, rate));
    CHECK(rep.l_hat == hat_L(s.scores, s.labels, rate).l_hat);
    std::size_t negs = 0;
    for (int y : s.labels) negs += (y == -1);
    CHECK(rep.m_hat ==
          rep.r_local_hat +
              (static_cast<double>(negs) / static_cast<double>(n)) * rep.l_hat);
    CHECK(rep.locauc_hat <= rep.auc_hat);
    CHECK(rep.locauc_hat <= rep.beta_hat + 1e-15);
    REQUIRE(rep.t_wilcoxon.has_value());
    CHECK(*rep.t_wilcoxon == t_wilcoxon(s.scores, s.labels));
    CHECK(*rep.t_local == t_local(s.scores, s.labels, rate));

    // strictly increasing transform: identical report except q_hat
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = 4.0 * s.scores[i];
    const auto rep2 = full_report(scaled, s.labels, rate);
    CHECK(rep2.q_hat == 4.0 * rep.q_hat);
    CHECK(rep2.l_hat == rep.l_hat);
    CHECK(rep2.auc_hat == rep.auc_hat);
    CHECK(rep2.locauc_hat == rep.locauc_hat);
    CHECK(rep2.trunc_auc_hat == rep.trunc_auc_hat);
    CHECK(rep2.r_local_hat == rep.r_local_hat);
    CHECK(*rep2.t_wilcoxon == *rep.t_wilcoxon);
    CHECK(*rep2.t_local == *rep.t_local);
    CHECK(*rep2.w_hat == *rep.w_hat);
    CHECK(rep2.m_hat == rep.m_hat);
    CHECK(rep2.alpha_hat == rep.alpha_hat);
    CHECK(rep2.beta_hat == rep.beta_hat);
  }

  {
    const auto s = random_sample(rng, 15, true);
    const auto rep = full_report(s.scores, s.labels, Rate::global());
    CHECK(rep.locauc_hat == rep.auc_hat);
    CHECK(*rep.t_local == *rep.t_wilcoxon);
    CHECK(rep.alpha_hat == 1.0);
    CHECK(rep.beta_hat == 1.0);
  }

  {
    // tied scores: rank fields are omitted, pair statistics still present
    const std::vector<double> tied{0.5, 0.5, 0.2, 0.9};
    const std::vector<int> labels{1, -1, -1, 1};
    const auto rep = full_report(tied, labels, Rate(0.5));
    CHECK_FALSE(rep.t_wilcoxon.has_value());
    CHECK_FALSE(rep.t_local.has_value());
    CHECK_FALSE(rep.w_hat.has_value());
    CHECK(rep.auc_hat == brute::auc(tied, labels));
  }

  CHECK_THROWS_AS(full_report(std::vector<double>{0.1, 0.2},
                              std::vector<int>{1, 1}, Rate(0.5)),
                  std::invalid_argument);
}

TEST_CASE("report JSON and roc CSV shape") {
  const std::vector<double> scores{0.9, 0.2, 0.7, 0.1};
  const std::vector<int> labels{1, 1, -1, -1};
  const auto rep = full_report(scores, labels, Rate(0.5));
  const auto json = rep.to_json();
  CHECK(json.find("\"m_hat\":") != std::string::npos);
  CHECK(json.find("\"locauc_hat\":0.75") != std::string::npos);

  const auto grep = full_report(scores, labels, Rate::global());
  CHECK(grep.to_json().find("\"u0\":\"global\"") != std::string::npos);

  const auto pts = roc_points(scores, labels, std::vector<double>{0.25, 0.5, 0.75});
  const auto csv = roc_csv(pts, 0.5);
  CHECK(csv.rfind("u,alpha,beta,d_line\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
