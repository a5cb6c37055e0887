// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criteria 2, 5 and 6 run through the same config front door as the CLI,
// on the shipped study configs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "locrank/locrank.hpp"

using namespace locrank;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

oracle::SyntheticModel uniform_linear_model() {
  return oracle::SyntheticModel(oracle::Marginal::uniform(0.0, 1.0),
                                oracle::Eta::linear(0.0, 1.0));
}

ScoringModel identity_score() {
  return ScoringModel::piecewise_linear({0.0, 1.0}, {0.0, 1.0}, 1.0, 1.0);
}

std::string config_path(const std::string& name) {
  return std::string(LOCRANK_CONFIG_DIR) + "/" + name;
}

std::string out_prefix(const std::string& name) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "locrank_acceptance";
  fs::create_directories(dir);
  return (dir / name).string();
}

void check_close(Outcome& out, const std::string& name, double got,
                 double want, double tol) {
  std::ostringstream msg;
  msg << name << ": |" << got << " - " << want << "| > " << tol;
  out.require(std::abs(got - want) <= tol, msg.str());
}

// 1. uniform-model ground truth, every value through two independent routes
Outcome criterion1() {
  Outcome out;
  const double tol = 1e-6;
  const auto model = uniform_linear_model();
  const auto s = identity_score();
  const Rate u0(0.2);

  // quadrature route
  const auto tq = oracle::true_report(model, s, u0);
  // closed-form route (hand integration under U(0,1), eta = x, u0 = 0.2)
  check_close(out, "q", tq.q, 0.8, tol);
  check_close(out, "beta", tq.beta, 0.36, tol);
  check_close(out, "alpha", tq.alpha, 0.04, tol);
  check_close(out, "L*", tq.l, 0.34, tol);
  check_close(out, "LocAUC", tq.locauc, 1333.0 / 3750.0, tol);
  check_close(out, "W", tq.w, 122.0 / 375.0, tol);
  check_close(out, "R", tq.r_local, 17.0 / 7500.0, tol);
  check_close(out, "K", tq.k, -0.16, tol);
  check_close(out, "K'", tq.k_prime, 0.6, tol);
  check_close(out, "sigma^2", sigma_sq(0.8, tq.k, tq.k_prime), 0.8704, tol);

  // relation/formula cross routes
  const auto bayes = oracle::bayes_report(model, u0, tol);
  check_close(out, "L* formula vs direct", bayes.l_star, bayes.l_star_direct, tol);
  check_close(out, "LocAUC pair route",
              oracle::locauc_via_pairs(model, s, u0), tq.locauc, tol);
  check_close(out, "W via Theorem-4 relation",
              0.5 * 0.5 * tq.beta * (2.0 - tq.beta) + 0.5 * tq.locauc, tq.w, tol);
  check_close(out, "R via Theorem-3 relation",
              2.0 * 0.5 * 0.5 * (tq.beta - tq.locauc), tq.r_local, tol);
  check_close(out, "K via L relation", tq.l - (1.0 - model.p()), tq.k, tol);
  return out;
}

// 2. identity suite on randomized triples (shipped config)
Outcome criterion2() {
  Outcome out;
  std::ostringstream log;
  const int code = config::run_identities(config_path("identities.toml"),
                                          out_prefix("identities"), 0, log);
  out.require(code == 0, "identity suite exit code " + std::to_string(code));
  return out;
}

// 3. exact finite-sample identities over 1000 random distinct-score samples
Outcome criterion3() {
  Outcome out;
  std::size_t boundary_tie_samples = 0;
  for (std::size_t trial = 0; trial < 1000; ++trial) {
    auto rng = child_stream(SeedSpec{303}, trial);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 199.0);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = rng.uniform01() + 0.5;  // positive, for the signed-rank form
      labels[i] = rng.bernoulli(0.5) ? 1 : -1;
    }
    labels[0] = 1;
    if (n > 1) labels[1] = -1;
    const double u0 = rng.uniform(0.05, 0.95);
    const Rate rate(u0);

    // corrected Wilcoxon-AUC relation, as integers
    const auto counts = pair_counts(scores, labels);
    const auto rank_sum = positive_rank_sum(scores, labels);
    if (counts.concordant + counts.pos * (counts.pos + 1) / 2 != rank_sum) {
      out.require(false, "wilcoxon identity violated at trial " +
                             std::to_string(trial));
      break;
    }

    const auto report = full_report(scores, labels, rate);
    long long negs = 0;
    for (int y : labels) negs += (y == -1);

    // L_hat = n_-/n + K_hat when no +1 sits at the quantile: the counts
    // n L_hat and n K_hat are integers, so the residual is asserted there
    const double k_hat = hat_K(scores, labels, rate.v0());
    long long pos_at_q = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (scores[i] == report.q_hat && labels[i] == 1) ++pos_at_q;
    const long long l_count = std::llround(report.l_hat * static_cast<double>(n));
    const long long k_count = std::llround(k_hat * static_cast<double>(n));
    if (pos_at_q > 0) ++boundary_tie_samples;
    if (l_count != negs + k_count - pos_at_q) {
      out.require(false, (pos_at_q == 0 ? "L=K identity violated at trial "
                                        : "boundary-tie bookkeeping violated at trial ") +
                             std::to_string(trial));
      break;
    }

    // M decomposition, exactly as composed in the report
    if (report.m_hat !=
        report.r_local_hat +
            (static_cast<double>(negs) / static_cast<double>(n)) * report.l_hat) {
      out.require(false, "M decomposition violated at trial " + std::to_string(trial));
      break;
    }

    // signed-rank equality, exactly
    if (hat_K_via_signed_ranks(scores, labels, rate.v0()) != k_hat) {
      out.require(false, "signed-rank equality violated at trial " +
                             std::to_string(trial));
      break;
    }

    // monotone-transform invariance of the whole report (q_hat equivariant)
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = 4.0 * scores[i];
    const auto rep2 = full_report(scaled, labels, rate);
    const bool invariant =
        rep2.q_hat == 4.0 * report.q_hat && rep2.l_hat == report.l_hat &&
        rep2.auc_hat == report.auc_hat && rep2.locauc_hat == report.locauc_hat &&
        rep2.trunc_auc_hat == report.trunc_auc_hat &&
        rep2.r_local_hat == report.r_local_hat && rep2.m_hat == report.m_hat &&
        rep2.alpha_hat == report.alpha_hat && rep2.beta_hat == report.beta_hat &&
        *rep2.t_wilcoxon == *report.t_wilcoxon &&
        *rep2.t_local == *report.t_local && *rep2.w_hat == *report.w_hat;
    if (!invariant) {
      out.require(false, "transform invariance violated at trial " +
                             std::to_string(trial));
      break;
    }
  }
  out.require(boundary_tie_samples > 0,
              "no boundary-tie case exercised (generator too tame)");
  std::ostringstream note;
  note << boundary_tie_samples << " boundary-tie samples handled";
  if (out.pass) out.detail = note.str();
  return out;
}

// 4. Lemma-1 / optimality dominance on 50 random piecewise-linear scorers
Outcome criterion4() {
  Outcome out;
  const double tol = 1e-6;
  const auto model = uniform_linear_model();
  const std::vector<double> u_values{0.1, 0.2, 0.35, 0.5, 0.7};

  // eta-side quantities and optimal scorers per u
  std::vector<double> alpha_eta(u_values.size()), beta_eta(u_values.size());
  std::vector<double> locauc_star(u_values.size()), w_star(u_values.size());
  for (std::size_t ui = 0; ui < u_values.size(); ++ui) {
    const Rate rate(u_values[ui]);
    const auto bayes = oracle::bayes_report(model, rate);
    alpha_eta[ui] = model.neg_mass(bayes.c_star) / (1.0 - model.p());
    beta_eta[ui] = model.pos_mass(bayes.c_star) / model.p();
    const auto s_star = oracle::optimal_scoring(model, rate);
    const auto star = oracle::true_report(model, s_star, rate);
    locauc_star[ui] = star.locauc;
    w_star[ui] = star.w;
  }

  std::vector<std::string> failures(50);
  experiments::parallel_for(50, 0, [&](std::size_t trial) {
    auto rng = child_stream(SeedSpec{404}, trial);
    const std::size_t bp_count = 2 + static_cast<std::size_t>(rng.uniform01() * 3.0);
    std::vector<double> bps{0.0};
    for (std::size_t b = 1; b + 1 < bp_count; ++b) bps.push_back(rng.uniform(0.1, 0.9));
    bps.push_back(1.0);
    std::sort(bps.begin(), bps.end());
    for (std::size_t b = 1; b < bps.size(); ++b)
      if (bps[b] - bps[b - 1] < 0.05) bps[b] = bps[b - 1] + 0.05;
    std::vector<double> values{0.0};
    for (std::size_t b = 1; b < bps.size(); ++b) {
      const double slope = rng.uniform(0.5, 3.0) * (rng.bernoulli(0.7) ? 1.0 : -1.0);
      values.push_back(values.back() + slope * (bps[b] - bps[b - 1]));
    }
    const auto s = ScoringModel::piecewise_linear(bps, values, 0.5, 3.0);

    std::ostringstream fail;
    for (std::size_t ui = 0; ui < u_values.size(); ++ui) {
      const Rate rate(u_values[ui]);
      const auto tq = oracle::true_report(model, s, rate);
      if (tq.beta > beta_eta[ui] + tol) fail << "beta dominance broken; ";
      if (tq.alpha < alpha_eta[ui] - tol) fail << "alpha dominance broken; ";
      if (tq.locauc > locauc_star[ui] + tol) fail << "LocAUC optimality broken; ";
      if (tq.w > w_star[ui] + tol) fail << "W optimality broken; ";
    }
    failures[trial] = fail.str();
  });
  for (std::size_t trial = 0; trial < failures.size(); ++trial)
    out.require(failures[trial].empty(),
                "trial " + std::to_string(trial) + ": " + failures[trial]);
  return out;
}

// 5. Prop.-4 decomposition bands (shipped config: 1000 reps)
Outcome criterion5() {
  Outcome out;
  std::ostringstream log;
  const int code = config::run_decomp(config_path("decomp.toml"),
                                      out_prefix("decomp"), 0, log);
  out.require(code == 0, "decomposition bands failed:\n" + log.str());
  return out;
}

// 6. rate reproduction, fast and slow settings (shipped configs)
Outcome criterion6() {
  Outcome out;
  {
    std::ostringstream log;
    const int code = config::run_rates(config_path("rates_fast.toml"),
                                       out_prefix("rates_fast"), 0, log);
    out.require(code == 0, "fast-rate band failed:\n" + log.str());
  }
  {
    std::ostringstream log;
    const int code = config::run_rates(config_path("rates_slow.toml"),
                                       out_prefix("rates_slow"), 0, log);
    out.require(code == 0, "slow-rate band failed:\n" + log.str());
  }
  return out;
}

// 7. ERM sanity: separable linear problem and finite-family selection
Outcome criterion7() {
  Outcome out;
  {
    auto rng = child_stream(SeedSpec{707}, 0);
    const std::size_t n = 500;
    std::vector<double> features;
    std::vector<int> labels;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x1 = rng.uniform01();
      const double x2 = rng.uniform01();
      features.push_back(x1);
      features.push_back(x2);
      const int y = (2.0 * x1 - x2 > 0.6) ? 1 : -1;
      labels.push_back(y);
      pos += (y == 1);
    }
    Dataset data(n, 2, std::move(features), std::move(labels));
    erm::ErmProblem problem;
    problem.family = erm::LinearFamilySpec{2};
    problem.criterion = erm::Criterion::LHat;
    problem.u0 = Rate(static_cast<double>(pos) / n);
    problem.budget = 1000;
    problem.restarts = 4;
    problem.seed = SeedSpec{7};
    const auto result = erm::erm_linear(problem, data);
    std::ostringstream msg;
    msg << "separable 2-d: l_hat = " << result.best_value << " > 0.05";
    out.require(result.best_value <= 0.05, msg.str());
  }
  {
    const auto model = uniform_linear_model();
    const Rate u0(0.2);
    std::vector<ScoringModel> members{
        ScoringModel::custom1d([](double x) { return x; }, {}, "eta-scorer")};
    for (double c : {0.85, 0.8, 0.75, 0.65, 0.5})
      members.push_back(ScoringModel::custom1d(
          [c](double x) { return 1.0 - std::abs(x - c); }, {c}, "tent"));
    auto family = std::make_shared<const ScoringFamily>(members, "selection");

    std::vector<int> selected(100, 0);
    experiments::parallel_for(100, 0, [&](std::size_t seed_idx) {
      auto rng = child_stream(SeedSpec{708}, seed_idx);
      const auto data = model.sample(10000, rng);
      erm::ErmProblem problem;
      problem.family = erm::FiniteFamilySpec{family};
      problem.criterion = erm::Criterion::LHat;
      problem.u0 = u0;
      problem.budget = family->size();
      const auto result = erm::erm_finite(problem, data);
      selected[seed_idx] = result.best.as_member()->index == 0 ? 1 : 0;
    });
    int hits = 0;
    for (int s : selected) hits += s;
    std::ostringstream msg;
    msg << "eta-scorer selected in " << hits << "/100 seeds (need >= 95)";
    out.require(hits >= 95, msg.str());
    if (out.pass) out.detail = msg.str();
  }
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "uniform-model ground truth, dual routes <= 1e-6", criterion1},
      {2, "identity suite on 20 randomized triples", criterion2},
      {3, "exact finite-sample identities, 1000 samples", criterion3},
      {4, "Lemma-1 / optimality dominance, 50 scorers x 5 rates", criterion4},
      {5, "decomposition: lambda slope and n Var(Zn) bands", criterion5},
      {6, "rate reproduction: fast and slow bands", criterion6},
      {7, "ERM sanity: separable linear & finite selection", criterion7},
  };

  bool all_pass = true;
  for (const auto& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.fn();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n",
                outcome.pass ? "PASS" : "FAIL", entry.id, entry.name, seconds,
                outcome.detail.empty() ? "" : " -- ",
                outcome.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
