#include <doctest.h>

#include <cmath>
#include <vector>

#include "locrank/oracle.hpp"
#include "locrank/rankcrit.hpp"

using namespace locrank;
using oracle::Eta;
using oracle::Marginal;
using oracle::SyntheticModel;

namespace {

SyntheticModel uniform_linear_model() {
  return SyntheticModel(Marginal::uniform(0.0, 1.0), Eta::linear(0.0, 1.0));
}

ScoringModel identity_score() {
  return ScoringModel::piecewise_linear({0.0, 1.0}, {0.0, 1.0}, 1.0, 1.0);
}

}  // namespace

// Closed forms below are hand integrations under X ~ U(0,1), eta(x) = x,
// u0 = 0.2: q = 0.8, beta = int_.8^1 x / .5 = 0.36, alpha = 0.04,
// L* = q^2/2 + (1-q)^2/2 = 0.34, LocAUC = 1333/3750, W = 122/375,
// R = 2p(1-p)(beta - LocAUC) = 17/7500, K = -0.16, K' = 0.6.
TEST_CASE("uniform model ground truth at u0 = 0.2") {
  const auto model = uniform_linear_model();
  CHECK(std::abs(model.p() - 0.5) < 1e-9);

  const auto tq = oracle::true_report(model, identity_score(), Rate(0.2));
  CHECK(std::abs(tq.q - 0.8) < 1e-9);
  CHECK(std::abs(tq.alpha - 0.04) < 1e-7);
  CHECK(std::abs(tq.beta - 0.36) < 1e-7);
  CHECK(std::abs(tq.l - 0.34) < 1e-7);
  CHECK(std::abs(tq.locauc - 1333.0 / 3750.0) < 1e-6);
  CHECK(std::abs(tq.w - 122.0 / 375.0) < 1e-6);
  CHECK(std::abs(tq.r_local - 17.0 / 7500.0) < 1e-6);
  CHECK(std::abs(tq.k - (-0.16)) < 1e-7);
  CHECK(std::abs(tq.k_prime - 0.6) < 1e-6);
  CHECK(std::abs(tq.m - (17.0 / 7500.0 + 0.5 * 0.34)) < 1e-6);
  CHECK_FALSE(tq.degenerate_quantile);

  // dual routes
  CHECK(std::abs(oracle::locauc_via_pairs(model, identity_score(), Rate(0.2)) -
                 tq.locauc) < 1e-6);
  const double trunc = oracle::trunc_auc_population(model, identity_score(), Rate(0.2));
  CHECK(std::abs(trunc - (tq.locauc - tq.beta + tq.alpha * tq.beta)) < 1e-6);

  CHECK(std::abs(sigma_sq(0.8, -0.16, 0.6) - 0.8704) < 1e-12);
}

TEST_CASE("true_quantile closed forms") {
  const auto model = uniform_linear_model();
  CHECK(std::abs(oracle::true_quantile(model, identity_score(), 0.8) - 0.8) < 1e-9);

  const auto doubled = ScoringModel::linear({2.0});
  CHECK(std::abs(oracle::true_quantile(model, doubled, 0.8) - 1.6) < 1e-9);

  // cdf of x^2 under U(0,1) is sqrt(t), so the 0.8-quantile is 0.64
  const auto squared =
      ScoringModel::custom1d([](double x) { return x * x; }, {}, "square");
  CHECK(std::abs(oracle::true_quantile(model, squared, 0.8) - 0.64) < 1e-9);
}

TEST_CASE("sampling follows the model") {
  const auto uniform = Marginal::uniform(0.0, 1.0);
  {
    SyntheticModel all_pos(uniform, Eta::constant(1.0));
    auto rng = child_stream(SeedSpec{11}, 0);
    const auto data = all_pos.sample(200, rng);
    CHECK(data.positives() == 200);
  }
  {
    SyntheticModel all_neg(uniform, Eta::constant(0.0));
    auto rng = child_stream(SeedSpec{11}, 1);
    const auto data = all_neg.sample(200, rng);
    CHECK(data.negatives() == 200);
  }
  {
    // binomial concentration: p = 1/2, n = 1e5, three sigma
    const auto model = uniform_linear_model();
    auto rng = child_stream(SeedSpec{11}, 2);
    const std::size_t n = 100000;
    const auto data = model.sample(n, rng);
    const double phat = static_cast<double>(data.positives()) / n;
    CHECK(std::abs(phat - 0.5) < 3.0 * std::sqrt(0.25 / n));
  }
  {
    SyntheticModel model(uniform, Eta::linear(0.0, 1.0));
    auto rng = child_stream(SeedSpec{11}, 3);
    CHECK_THROWS_AS(model.sample(0, rng), std::invalid_argument);
  }
}

TEST_CASE("bayes_report both routes and Remark-1 relations") {
  const auto model = uniform_linear_model();
  const auto bayes = oracle::bayes_report(model, Rate(0.2));
  CHECK(std::abs(bayes.q_eta - 0.8) < 1e-9);
  CHECK(std::abs(bayes.l_star - 0.34) < 1e-7);
  CHECK(std::abs(bayes.l_star_direct - 0.34) < 1e-7);
  CHECK(bayes.difference < 1e-6);
  CHECK_FALSE(bayes.degenerate);
  CHECK(bayes.contains(0.9));
  CHECK_FALSE(bayes.contains(0.5));

  // L(g*) = 2(1-p) alpha + p - u0 and the corrected beta form
  const auto tq = oracle::true_report(model, identity_score(), Rate(0.2));
  CHECK(std::abs(2.0 * 0.5 * tq.alpha + 0.5 - 0.2 - bayes.l_star) < 1e-6);
  CHECK(std::abs(2.0 * 0.5 * (1.0 - tq.beta) - 0.5 + 0.2 - bayes.l_star) < 1e-6);

  // u0 near 1: q_eta -> 0 and L* -> p
  const auto near_global = oracle::bayes_report(model, Rate(0.999));
  CHECK(near_global.q_eta < 2e-3);
  CHECK(std::abs(near_global.l_star - 0.5) < 2e-3);
}

TEST_CASE("excess risk dual route") {
  const auto model = uniform_linear_model();

  // the identity scorer induces exactly C*, so the excess vanishes
  CHECK(std::abs(oracle::excess_risk(model, identity_score(), Rate(0.2))) < 1e-6);

  // reversed scorer: top set [0, 0.2]; excess = 2 int |x - 0.8| over
  // [0,0.2] u [0.8,1] = 0.32
  const auto reversed = ScoringModel::linear({-1.0});
  double via_delta = 0.0, via_risk = 0.0;
  const double excess =
      oracle::excess_risk(model, reversed, Rate(0.2), 1e-6, &via_delta, &via_risk);
  CHECK(std::abs(excess - 0.32) < 1e-6);
  CHECK(std::abs(via_delta - via_risk) < 1e-6);

  // strictly increasing transform of eta stays optimal
  const auto transformed = ScoringModel::custom1d(
      [](double x) { return 3.0 * x + 1.0; }, {}, "affine-of-eta");
  CHECK(std::abs(oracle::excess_risk(model, transformed, Rate(0.2))) < 1e-6);
}

TEST_CASE("optimal_scoring construction and dominance") {
  const auto model = uniform_linear_model();
  const auto s_star = oracle::optimal_scoring(model, Rate(0.2));
  CHECK(std::abs(s_star.evaluate1d(0.9) - 0.9) < 1e-9);
  CHECK(s_star.evaluate1d(0.5) < 0.8);
  CHECK(s_star.evaluate1d(0.5) == s_star.evaluate1d(0.1));

  const auto star_report = oracle::true_report(model, s_star, Rate(0.2));
  auto rng = child_stream(SeedSpec{23}, 0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> bps{0.0, rng.uniform(0.2, 0.5), rng.uniform(0.55, 0.9), 1.0};
    std::vector<double> values{0.0};
    for (std::size_t b = 1; b < bps.size(); ++b) {
      const double slope = rng.uniform(0.5, 2.0) * (rng.bernoulli(0.7) ? 1.0 : -1.0);
      values.push_back(values.back() + slope * (bps[b] - bps[b - 1]));
    }
    const auto s = ScoringModel::piecewise_linear(bps, values, 0.5, 2.0);
    const auto tq = oracle::true_report(model, s, Rate(0.2));
    CHECK(tq.locauc <= star_report.locauc + 1e-6);
    CHECK(tq.w <= star_report.w + 1e-6);
  }
}

TEST_CASE("w_constant closed form balances the 2pW relation") {
  CHECK(std::abs(oracle::w_constant(0.5, 0.2) - 0.5775) < 1e-12);
  // boundary algebra: p + u0 -> 2 gives 1
  CHECK(std::abs(oracle::w_constant(0.999999, 0.999999) - 1.0) < 1e-5);

  const auto model = uniform_linear_model();
  const auto tq = oracle::true_report(model, identity_score(), Rate(0.2));
  const double lhs = 2.0 * 0.5 * tq.w;
  const double rhs = oracle::w_constant(0.5, 0.2) + (0.35 - 1.0) * tq.l -
                     0.25 * tq.l * tq.l - tq.r_local;
  CHECK(std::abs(lhs - rhs) < 1e-6);
}

TEST_CASE("constant eta: independence and the degenerate quantile") {
  SyntheticModel model(Marginal::uniform(0.0, 1.0), Eta::constant(0.7));
  CHECK(std::abs(model.p() - 0.7) < 1e-9);

  // labels independent of X: alpha = beta = u0, l = c + u0 - 2 c u0
  const auto tq = oracle::true_report(model, identity_score(), Rate(0.2));
  CHECK(std::abs(tq.alpha - 0.2) < 1e-7);
  CHECK(std::abs(tq.beta - 0.2) < 1e-7);
  CHECK(std::abs(tq.l - (0.7 + 0.2 - 2.0 * 0.7 * 0.2)) < 1e-7);
  // LocAUC for independent labels: P(X > X', X >= q) = u0(2-u0)/2
  CHECK(std::abs(tq.locauc - 0.2 * 1.8 / 2.0) < 1e-6);

  // eta(X) has an atom: the generalized inverse lands on it and the report
  // flags the broken mass constraint instead of failing
  const auto bayes = oracle::bayes_report(model, Rate(0.2));
  CHECK(bayes.degenerate);
  CHECK(std::abs(bayes.q_eta - 0.7) < 1e-9);
}

TEST_CASE("flat eta regions: generalized inverse at a plateau") {
  SyntheticModel model(Marginal::uniform(0.0, 1.0), Eta::step_smooth(0.5, 0.2));
  // eta = 1 on [0.6, 1], mass 0.4 > u0 = 0.2: quantile sits at the atom
  const auto bayes = oracle::bayes_report(model, Rate(0.2));
  CHECK(bayes.degenerate);
  CHECK(std::abs(bayes.q_eta - 1.0) < 1e-9);
  REQUIRE(bayes.c_star.size() == 1);
  CHECK(std::abs(bayes.c_star.front().first - 0.6) < 1e-6);
  CHECK(std::abs(bayes.c_star.front().second - 1.0) < 1e-9);

  // a rate clear of both atoms is well-posed again
  const auto ok = oracle::bayes_report(model, Rate(0.5));
  CHECK_FALSE(ok.degenerate);
}

TEST_CASE("gaussian mixture marginal sanity") {
  const auto mix = Marginal::gaussian_mixture(0.4, 0.3, 0.15, 0.7, 0.2, 0.0, 1.0);
  CHECK(std::abs(mix.mass(0.0, 1.0) - 1.0) < 1e-12);
  CHECK(mix.cdf(0.3) < mix.cdf(0.5));
  CHECK(mix.pdf(0.5) > 0.0);

  SyntheticModel model(mix, Eta::logistic(4.0, -2.0));
  CHECK(model.p() > 0.0);
  CHECK(model.p() < 1.0);

  // D-line under a random piecewise-linear scorer
  const auto s = ScoringModel::piecewise_linear({0.0, 0.4, 1.0}, {0.0, 0.6, 0.2},
                                                0.5, 2.0);
  const auto tq = oracle::true_report(model, s, Rate(0.3));
  CHECK(std::abs(model.p() * tq.beta + (1.0 - model.p()) * tq.alpha - 0.3) < 1e-6);

  auto rng = child_stream(SeedSpec{5}, 0);
  const auto data = model.sample(50000, rng);
  const double phat = static_cast<double>(data.positives()) / 50000.0;
  CHECK(std::abs(phat - model.p()) < 4.0 * std::sqrt(0.25 / 50000.0));
}

TEST_CASE("population point at the degenerate endpoint v = 1") {
  const auto model = uniform_linear_model();
  const auto pop = oracle::population_point(model, identity_score(), 1.0);
  CHECK(std::abs(pop.k - 0.0) < 1e-7);  // 2p - 1 with p = 1/2
  CHECK(std::abs(pop.q - 1.0) < 1e-6);
  CHECK(std::abs(sigma_sq(1.0, pop.k, pop.k_prime) - 1.0) < 1e-4);
}
