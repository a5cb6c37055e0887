#include "locrank/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "locrank/classify.hpp"
#include "locrank/edf.hpp"
#include "locrank/rankcrit.hpp"

namespace locrank::experiments {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Least-squares slope of log(y) on log(x), with its standard error.
struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  bool defined = false;
};

SlopeFit fit_loglog(const std::vector<std::size_t>& x, const std::vector<double>& y) {
  SlopeFit out;
  if (x.size() < 2 || x.size() != y.size()) return out;
  for (double v : y)
    if (!(v > 0.0)) return out;
  const std::size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    lx[i] = std::log(static_cast<double>(x[i]));
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) return out;
  out.slope = sxy / sxx;
  if (m > 2) {
    double rss = 0.0;
    const double intercept = my - out.slope * mx;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = ly[i] - intercept - out.slope * lx[i];
      rss += r * r;
    }
    out.stderr_ = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  }
  out.defined = true;
  return out;
}

double median_abs(std::vector<double> v) {
  for (double& x : v) x = std::abs(x);
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  if (m == 0) return 0.0;
  return (m % 2 == 1) ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                      static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

double true_criterion_value(const oracle::SyntheticModel& model,
                            const ScoringModel& s, erm::Criterion c, Rate u0) {
  const auto tq = oracle::true_report(model, s, u0);
  switch (c) {
    case erm::Criterion::LHat: return tq.l;
    case erm::Criterion::MHat: return tq.m;
    case erm::Criterion::LocAuc: return tq.locauc;
    case erm::Criterion::WHat: return tq.w;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// rate study

RateStudyResult rate_study(const RateStudySetup& setup) {
  if (!setup.family || setup.family->size() == 0)
    throw std::invalid_argument("rate_study: empty family");
  if (setup.n_grid.empty()) throw std::invalid_argument("rate_study: empty n grid");
  if (setup.reps == 0) throw std::invalid_argument("rate_study: reps must be >= 1");

  const bool maximize = erm::criterion_maximizes(setup.criterion);

  // population value of the criterion for every member, once
  std::vector<double> member_values(setup.family->size());
  parallel_for(member_values.size(), setup.workers, [&](std::size_t i) {
    member_values[i] = true_criterion_value(setup.model, setup.family->at(i),
                                            setup.criterion, setup.u0);
  });

  double reference = 0.0;
  if (setup.reference == Reference::FamilyInf) {
    reference = maximize
                    ? *std::max_element(member_values.begin(), member_values.end())
                    : *std::min_element(member_values.begin(), member_values.end());
  } else {
    const auto s_star = oracle::optimal_scoring(setup.model, setup.u0);
    reference = true_criterion_value(setup.model, s_star, setup.criterion, setup.u0);
    if (setup.criterion == erm::Criterion::LHat) {
      // independent route for the Bayes risk
      const auto bayes = oracle::bayes_report(setup.model, setup.u0);
      if (std::abs(bayes.l_star - reference) > 1e-6)
        throw oracle::oracle_error("rate_study: L* routes disagree");
      reference = bayes.l_star;
    }
  }

  RateStudyResult out;
  out.n_grid = setup.n_grid;
  out.slope_band = setup.slope_band;
  out.family_true_values = member_values;
  out.reference_value = reference;
  out.excess.assign(setup.n_grid.size(), std::vector<double>(setup.reps, 0.0));

  std::atomic<std::size_t> clipped{0};
  const std::size_t total = setup.n_grid.size() * setup.reps;
  parallel_for(total, setup.workers, [&](std::size_t task) {
    const std::size_t n_idx = task / setup.reps;
    const std::size_t rep = task % setup.reps;
    auto rng = child_stream(setup.seed, task);
    const auto data = setup.model.sample(setup.n_grid[n_idx], rng);

    erm::ErmProblem problem;
    problem.family = erm::FiniteFamilySpec{setup.family};
    problem.criterion = setup.criterion;
    problem.u0 = setup.u0;
    problem.budget = setup.family->size();
    problem.restarts = 1;
    const auto result = erm::erm_finite(problem, data);
    const auto* member = result.best.as_member();
    const std::size_t chosen = member ? member->index : 0;

    double excess = maximize ? reference - member_values[chosen]
                             : member_values[chosen] - reference;
    if (excess < 0.0) {
      if (excess < -1e-12) ++clipped;
      excess = 0.0;
    }
    out.excess[n_idx][rep] = excess;
  });
  out.clipped_negatives = clipped.load();

  out.mean.resize(setup.n_grid.size());
  out.standard_error.resize(setup.n_grid.size());
  for (std::size_t i = 0; i < setup.n_grid.size(); ++i) {
    const auto& v = out.excess[i];
    out.mean[i] = std::accumulate(v.begin(), v.end(), 0.0) /
                  static_cast<double>(v.size());
    out.standard_error[i] =
        std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
  }

  const auto fit = fit_loglog(out.n_grid, out.mean);
  out.slope = fit.slope;
  out.slope_stderr = fit.stderr_;
  out.slope_defined = fit.defined;
  out.band_pass = fit.defined && fit.slope >= setup.slope_band[0] &&
                  fit.slope <= setup.slope_band[1];

  std::ostringstream echo;
  echo << "model=" << setup.model.describe()
       << " family=" << setup.family->name() << "(" << setup.family->size() << ")"
       << " criterion=" << erm::criterion_name(setup.criterion)
       << " u0=" << (setup.u0.is_global() ? std::string("global") : fmt(setup.u0.u0()))
       << " reps=" << setup.reps << " seed=" << setup.seed.master
       << " reference=" << (setup.reference == Reference::Bayes ? "bayes" : "family_inf");
  out.config_echo = echo.str();
  return out;
}

bool mean_nonincreasing_up_to_one_violation(const std::vector<double>& mean) {
  std::size_t violations = 0;
  for (std::size_t i = 1; i < mean.size(); ++i)
    if (mean[i] > mean[i - 1]) ++violations;
  return violations <= 1;
}

std::string RateStudyResult::to_json() const {
  std::ostringstream os;
  os << "{\"n_grid\":[";
  for (std::size_t i = 0; i < n_grid.size(); ++i) os << (i ? "," : "") << n_grid[i];
  os << "],\"mean_excess\":[";
  for (std::size_t i = 0; i < mean.size(); ++i) os << (i ? "," : "") << fmt(mean[i]);
  os << "],\"standard_error\":[";
  for (std::size_t i = 0; i < standard_error.size(); ++i)
    os << (i ? "," : "") << fmt(standard_error[i]);
  os << "],\"slope\":" << fmt(slope) << ",\"slope_stderr\":" << fmt(slope_stderr)
     << ",\"slope_defined\":" << (slope_defined ? "true" : "false")
     << ",\"slope_band\":[" << fmt(slope_band[0]) << "," << fmt(slope_band[1])
     << "],\"band_pass\":" << (band_pass ? "true" : "false")
     << ",\"clipped_negatives\":" << clipped_negatives
     << ",\"reference_value\":" << fmt(reference_value)
     << ",\"family_true_values\":[";
  for (std::size_t i = 0; i < family_true_values.size(); ++i)
    os << (i ? "," : "") << fmt(family_true_values[i]);
  os << "],\"config\":\"" << config_echo << "\"}";
  return os.str();
}

std::string RateStudyResult::raw_csv() const {
  std::string out = "n,replication,excess\n";
  char buf[96];
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    for (std::size_t r = 0; r < excess[i].size(); ++r) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", n_grid[i], r, excess[i][r]);
      out += buf;
    }
  return out;
}

// ---------------------------------------------------------------------------
// decomposition study

DecompStudyResult decomposition_study(const DecompStudySetup& setup) {
  if (setup.n_grid.empty())
    throw std::invalid_argument("decomposition_study: empty n grid");
  if (setup.reps == 0)
    throw std::invalid_argument("decomposition_study: reps must be >= 1");
  if (!(setup.v > 0.0) || setup.v > 1.0)
    throw std::invalid_argument("decomposition_study: v must lie in (0,1]");

  const auto pop = oracle::population_point(setup.model, setup.score, setup.v);
  const double sig2 = sigma_sq(setup.v, pop.k, pop.k_prime);

  DecompStudyResult out;
  out.n_grid = setup.n_grid;
  out.sigma_sq_ref = sig2;
  out.lambda_slope_band = setup.lambda_slope_band;
  out.lambda.assign(setup.n_grid.size(), std::vector<double>(setup.reps, 0.0));
  out.z_n.assign(setup.n_grid.size(), std::vector<double>(setup.reps, 0.0));

  const std::size_t total = setup.n_grid.size() * setup.reps;
  parallel_for(total, setup.workers, [&](std::size_t task) {
    const std::size_t n_idx = task / setup.reps;
    const std::size_t rep = task % setup.reps;
    auto rng = child_stream(setup.seed, task);
    const auto data = setup.model.sample(setup.n_grid[n_idx], rng);
    const auto scores = score_dataset(setup.score, data);
    const auto d = decompose(scores, data.labels(), setup.v, pop);
    out.lambda[n_idx][rep] = d.lambda_n;
    out.z_n[n_idx][rep] = d.z_n;
  });

  out.median_abs_lambda.resize(setup.n_grid.size());
  out.n_var_zn.resize(setup.n_grid.size());
  for (std::size_t i = 0; i < setup.n_grid.size(); ++i) {
    out.median_abs_lambda[i] = median_abs(out.lambda[i]);
    out.n_var_zn[i] =
        static_cast<double>(setup.n_grid[i]) * sample_variance(out.z_n[i]);
  }

  const auto fit = fit_loglog(out.n_grid, out.median_abs_lambda);
  out.lambda_slope = fit.slope;
  out.slope_defined = fit.defined;
  out.slope_pass = fit.defined && fit.slope >= setup.lambda_slope_band[0] &&
                   fit.slope <= setup.lambda_slope_band[1];

  out.variance_pass = true;
  for (std::size_t i = 0; i < setup.n_grid.size(); ++i) {
    if (setup.n_grid[i] < setup.var_min_n) continue;
    if (std::abs(out.n_var_zn[i] - sig2) > setup.var_rel_tol * sig2)
      out.variance_pass = false;
  }
  out.band_pass = (!fit.defined || out.slope_pass) && out.variance_pass;

  std::ostringstream echo;
  echo << "model=" << setup.model.describe() << " score=" << setup.score.name()
       << " v=" << fmt(setup.v) << " reps=" << setup.reps
       << " seed=" << setup.seed.master << " K=" << fmt(pop.k)
       << " K'=" << fmt(pop.k_prime) << " Q=" << fmt(pop.q);
  out.config_echo = echo.str();
  return out;
}

std::string DecompStudyResult::to_json() const {
  std::ostringstream os;
  os << "{\"n_grid\":[";
  for (std::size_t i = 0; i < n_grid.size(); ++i) os << (i ? "," : "") << n_grid[i];
  os << "],\"median_abs_lambda\":[";
  for (std::size_t i = 0; i < median_abs_lambda.size(); ++i)
    os << (i ? "," : "") << fmt(median_abs_lambda[i]);
  os << "],\"n_var_zn\":[";
  for (std::size_t i = 0; i < n_var_zn.size(); ++i)
    os << (i ? "," : "") << fmt(n_var_zn[i]);
  os << "],\"sigma_sq\":" << fmt(sigma_sq_ref)
     << ",\"lambda_slope\":" << fmt(lambda_slope)
     << ",\"slope_defined\":" << (slope_defined ? "true" : "false")
     << ",\"lambda_slope_band\":[" << fmt(lambda_slope_band[0]) << ","
     << fmt(lambda_slope_band[1]) << "]"
     << ",\"slope_pass\":" << (slope_pass ? "true" : "false")
     << ",\"variance_pass\":" << (variance_pass ? "true" : "false")
     << ",\"band_pass\":" << (band_pass ? "true" : "false")
     << ",\"config\":\"" << config_echo << "\"}";
  return os.str();
}

std::string DecompStudyResult::raw_csv() const {
  std::string out = "n,replication,z_n,lambda_n\n";
  char buf[128];
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    for (std::size_t r = 0; r < lambda[i].size(); ++r) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", n_grid[i], r,
                    z_n[i][r], lambda[i][r]);
      out += buf;
    }
  return out;
}

// ---------------------------------------------------------------------------
// identity suite

namespace {

void add_check(IdentitySuiteResult& out, const std::string& name,
               const std::string& triple, double residual, double tol,
               bool empirical) {
  IdentityCheck c;
  c.name = name;
  c.triple = triple;
  c.residual = residual;
  c.tolerance = tol;
  c.empirical = empirical;
  c.pass = residual <= tol;
  if (!c.pass) out.all_pass = false;
  out.checks.push_back(std::move(c));
}

}  // namespace

IdentitySuiteResult identity_suite(const oracle::SyntheticModel& model,
                                   const std::vector<ScoringModel>& scorers,
                                   const std::vector<Rate>& rates,
                                   std::size_t n_empirical, SeedSpec seed,
                                   double population_tol,
                                   double empirical_locauc_tol) {
  IdentitySuiteResult out;
  const double p = model.p();
  std::size_t triple_index = 0;

  for (const auto& rate : rates) {
    const auto bayes = oracle::bayes_report(model, rate, population_tol);
    const double alpha_eta = model.neg_mass(bayes.c_star) / (1.0 - p);
    const double beta_eta = model.pos_mass(bayes.c_star) / p;
    const double u0 = rate.u0();

    for (const auto& s : scorers) {
      std::ostringstream label;
      label << model.describe() << " | s=" << s.name() << " | u0=" << fmt(u0);
      const std::string triple = label.str();

      const auto tq = oracle::true_report(model, s, rate);

      add_check(out, "d_line_mass_constraint", triple,
                std::abs(p * tq.beta + (1.0 - p) * tq.alpha - u0),
                population_tol, false);
      add_check(out, "theorem3_locauc", triple,
                std::abs(tq.locauc -
                         (tq.beta - tq.r_local / (2.0 * p * (1.0 - p)))),
                population_tol, false);
      add_check(out, "theorem4_w", triple,
                std::abs(tq.w - (0.5 * p * tq.beta * (2.0 - tq.beta) +
                                 (1.0 - p) * tq.locauc)),
                population_tol, false);
      add_check(out, "sec4_locauc_relation", triple,
                std::abs(2.0 * p * (1.0 - p) * tq.locauc -
                         ((1.0 - p) * (p + u0) - (1.0 - p) * tq.l - tq.r_local)),
                population_tol, false);
      add_check(out, "sec4_w_relation", triple,
                std::abs(2.0 * p * tq.w -
                         (oracle::w_constant(p, u0) +
                          (0.5 * (p + u0) - 1.0) * tq.l -
                          0.25 * tq.l * tq.l - tq.r_local)),
                population_tol, false);
      add_check(out, "prop1_lstar_dual_route", triple, bayes.difference,
                population_tol, false);
      add_check(out, "remark1_alpha_form", triple,
                std::abs(tq.l - (2.0 * (1.0 - p) * tq.alpha + p - u0)),
                population_tol, false);
      add_check(out, "remark1_beta_form_corrected", triple,
                std::abs(tq.l - (2.0 * p * (1.0 - tq.beta) - p + u0)),
                population_tol, false);
      add_check(out, "locauc_dual_route", triple,
                std::abs(tq.locauc - oracle::locauc_via_pairs(model, s, rate)),
                population_tol, false);
      add_check(out, "trunc_auc_rearrangement", triple,
                std::abs(oracle::trunc_auc_population(model, s, rate) -
                         (tq.locauc - tq.beta + tq.alpha * tq.beta)),
                population_tol, false);
      add_check(out, "lemma1_dominance", triple,
                std::max(0.0, tq.beta - beta_eta) +
                    std::max(0.0, alpha_eta - tq.alpha),
                population_tol, false);
      {
        // infinite tolerance: the residual is reported as a check here, not
        // raised as an error
        double via_delta = 0.0, via_risk = 0.0;
        oracle::excess_risk(model, s, rate,
                            std::numeric_limits<double>::infinity(),
                            &via_delta, &via_risk);
        add_check(out, "excess_risk_dual_route", triple,
                  std::abs(via_delta - via_risk), population_tol, false);
      }

      // finite-sample identities on one sampled dataset
      if (n_empirical >= 2) {
        auto rng = child_stream(seed, triple_index);
        const auto data = model.sample(n_empirical, rng);
        const auto scores = score_dataset(s, data);
        const auto labels = data.labels();
        const double n = static_cast<double>(data.rows());

        const auto counts = pair_counts(scores, labels);
        const std::uint64_t rank_sum = positive_rank_sum(scores, labels);
        const std::uint64_t wilcoxon_lhs =
            counts.concordant + counts.pos * (counts.pos + 1) / 2;
        add_check(out, "wilcoxon_auc_integer_identity", triple,
                  wilcoxon_lhs == rank_sum ? 0.0 : 1.0, 0.0, true);

        const auto report = full_report(scores, labels, rate);
        std::size_t negs = 0;
        for (int y : labels) negs += (y == -1);
        add_check(out, "m_hat_decomposition", triple,
                  std::abs(report.m_hat -
                           (report.r_local_hat +
                            (static_cast<double>(negs) / n) * report.l_hat)),
                  0.0, true);

        // L_hat = n_-/n + K_hat, adjusted for +1 labels sitting exactly at
        // the empirical quantile (the documented boundary case); exact at
        // the count level, so asserted on integers
        const double k_hat = hat_K(scores, labels, rate.v0());
        long long pos_at_q = 0;
        for (std::size_t i = 0; i < scores.size(); ++i)
          if (scores[i] == report.q_hat && labels[i] == 1) ++pos_at_q;
        const long long l_count = std::llround(report.l_hat * n);
        const long long k_count = std::llround(k_hat * n);
        add_check(out, "lhat_khat_identity", triple,
                  static_cast<double>(std::abs(
                      l_count - (static_cast<long long>(negs) + k_count - pos_at_q))),
                  0.0, true);

        // signed-rank route needs positive scores; shift-invariance of the
        // count makes the comparison exact
        std::vector<double> shifted(scores.begin(), scores.end());
        const double lift = *std::min_element(shifted.begin(), shifted.end());
        for (double& v : shifted) v = v - lift + 1.0;
        add_check(out, "k_hat_signed_rank_equality", triple,
                  std::abs(hat_K(shifted, labels, rate.v0()) -
                           hat_K_via_signed_ranks(shifted, labels, rate.v0())),
                  0.0, true);

        add_check(out, "locauc_empirical_vs_population", triple,
                  std::abs(report.locauc_hat - tq.locauc),
                  empirical_locauc_tol, true);
      }
      ++triple_index;
    }
  }
  return out;
}

std::string IdentitySuiteResult::to_json() const {
  std::ostringstream os;
  os << "{\"all_pass\":" << (all_pass ? "true" : "false") << ",\"checks\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    os << (i ? "," : "") << "{\"name\":\"" << c.name << "\",\"triple\":\""
       << c.triple << "\",\"residual\":" << fmt(c.residual)
       << ",\"tolerance\":" << fmt(c.tolerance)
       << ",\"empirical\":" << (c.empirical ? "true" : "false")
       << ",\"pass\":" << (c.pass ? "true" : "false") << "}";
  }
  os << "]}";
  return os.str();
}

// ---------------------------------------------------------------------------
// study families

std::shared_ptr<const ScoringFamily> band_swap_family(
    const oracle::SyntheticModel& model, Rate u0, std::size_t count,
    double step) {
  if (count == 0) throw std::invalid_argument("band_swap_family: empty family");
  if (!(step >= 0.0)) throw std::invalid_argument("band_swap_family: bad step");
  const auto bayes = oracle::bayes_report(model, u0);
  if (bayes.c_star.size() != 1)
    throw std::invalid_argument(
        "band_swap_family: needs a model whose best-instance set is one "
        "interval (monotone eta)");
  const double b = bayes.c_star.front().first;  // C* boundary
  const double lo = model.marginal().lo();
  const double hi = model.marginal().hi();
  const double max_offset = static_cast<double>(count - 1) * step;
  if (!(b - max_offset > lo) || !(b + max_offset < hi))
    throw std::invalid_argument("band_swap_family: offsets leave the support");

  std::vector<ScoringModel> members;
  members.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = static_cast<double>(k) * step;
    if (a == 0.0) {
      members.push_back(ScoringModel::custom1d(
          [](double x) { return x; }, {}, "band_swap[0]"));
      continue;
    }
    auto fn = [a, b](double x) {
      if (x >= b - a && x < b) return x + 2.0 * a;  // promoted band
      if (x >= b && x < b + a) return x - a;        // demoted band
      return x;
    };
    std::ostringstream name;
    name << "band_swap[" << k << "]";
    members.push_back(ScoringModel::custom1d(
        std::move(fn), {b - a, b, b + a}, name.str()));
  }
  return std::make_shared<const ScoringFamily>(std::move(members), "band_swap");
}

std::shared_ptr<const ScoringFamily> tent_family(
    const std::vector<double>& centers, const std::vector<std::string>& styles,
    double twin_offset) {
  if (centers.empty()) throw std::invalid_argument("tent_family: no centers");
  if (!styles.empty() && styles.size() != centers.size())
    throw std::invalid_argument("tent_family: styles/centers size mismatch");
  if (!(twin_offset > 0.0))
    throw std::invalid_argument("tent_family: twin offset must be positive");

  std::vector<ScoringModel> members;
  members.reserve(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double c = centers[i];
    const std::string style = styles.empty() ? "single" : styles[i];
    if (style == "single") {
      auto fn = [c](double x) { return 1.0 - std::abs(x - c); };
      members.push_back(ScoringModel::custom1d(std::move(fn), {c},
                                               "tent(" + fmt(c) + ")"));
    } else if (style == "twin") {
      const double l = c - twin_offset;
      const double r = c + twin_offset;
      auto fn = [l, r](double x) {
        return 1.0 - std::min(std::abs(x - l), std::abs(x - r));
      };
      members.push_back(ScoringModel::custom1d(std::move(fn), {l, c, r},
                                               "twin-tent(" + fmt(c) + ")"));
    } else {
      throw std::invalid_argument("tent_family: style must be single or twin");
    }
  }
  return std::make_shared<const ScoringFamily>(std::move(members), "tents");
}

}  // namespace locrank::experiments
