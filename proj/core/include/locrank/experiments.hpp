#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locrank/erm.hpp"
#include "locrank/oracle.hpp"
#include "locrank/rate.hpp"
#include "locrank/rng.hpp"
#include "locrank/scoring.hpp"

namespace locrank::experiments {

/// Runs body(0..count-1) on `workers` threads (0 = hardware concurrency).
/// Work items must not depend on execution order; the studies below keep
/// their reductions order-free so worker count never changes results.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

/// Which population value the per-replication excess risk is measured
/// against: the Bayes optimum L*_{u0} (fast-rate setting, s* in the family)
/// or the infimum over the family (slow-rate setting).
enum class Reference { Bayes, FamilyInf };

struct RateStudySetup {
  oracle::SyntheticModel model;
  std::shared_ptr<const ScoringFamily> family;
  erm::Criterion criterion = erm::Criterion::LHat;
  Rate u0 = Rate(0.2);
  std::vector<std::size_t> n_grid;
  std::size_t reps = 200;
  SeedSpec seed;
  Reference reference = Reference::Bayes;
  std::array<double, 2> slope_band{-0.9, -0.45};
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::string label;
};

struct RateStudyResult {
  std::vector<std::size_t> n_grid;
  std::vector<std::vector<double>> excess;  // [n index][replication]
  std::vector<double> mean;
  std::vector<double> standard_error;
  double slope = 0.0;
  double slope_stderr = 0.0;
  bool slope_defined = false;
  std::array<double, 2> slope_band{0.0, 0.0};
  bool band_pass = false;
  std::size_t clipped_negatives = 0;  // tiny negative excesses clipped to 0
  std::vector<double> family_true_values;
  double reference_value = 0.0;
  std::string config_echo;

  std::string to_json() const;
  std::string raw_csv() const;  // n,replication,excess
};

/// For each n and replication: sample, run ERM over the family, measure the
/// true excess risk through the oracle, then fit the log-log slope of the
/// mean excess against n.
RateStudyResult rate_study(const RateStudySetup& setup);

/// At most one increase of the mean along the grid (noise allowance).
bool mean_nonincreasing_up_to_one_violation(const std::vector<double>& mean);

struct DecompStudySetup {
  oracle::SyntheticModel model;
  ScoringModel score;
  double v = 0.8;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 1000;
  SeedSpec seed;
  std::array<double, 2> lambda_slope_band{-1.4, -0.6};
  double var_rel_tol = 0.10;     // |n Var(Zn) - sigma^2| / sigma^2 bound
  std::size_t var_min_n = 1000;  // the variance band applies from this n on
  std::size_t workers = 0;
  std::string label;
};

struct DecompStudyResult {
  std::vector<std::size_t> n_grid;
  std::vector<double> median_abs_lambda;
  std::vector<double> n_var_zn;
  double sigma_sq_ref = 0.0;
  double lambda_slope = 0.0;
  bool slope_defined = false;
  std::array<double, 2> lambda_slope_band{0.0, 0.0};
  bool slope_pass = false;
  bool variance_pass = false;
  bool band_pass = false;
  std::string config_echo;

  std::string to_json() const;
  std::string raw_csv() const;  // n,replication,k_hat,z_n,lambda_n
  std::vector<std::vector<double>> lambda;  // raw, [n index][rep]
  std::vector<std::vector<double>> z_n;
};

DecompStudyResult decomposition_study(const DecompStudySetup& setup);

struct IdentityCheck {
  std::string name;
  std::string triple;   // which (model, s, u0) it was evaluated on
  double residual = 0.0;
  double tolerance = 0.0;
  bool empirical = false;  // finite-sample check (vs population integration)
  bool pass = false;
};

struct IdentitySuiteResult {
  std::vector<IdentityCheck> checks;
  bool all_pass = true;
  std::string to_json() const;
};

/// Confronts every identity of the methodology on one model, crossing the
/// given scorers and rates: population residuals by integration, exact
/// finite-sample identities and the empirical-vs-population LocAUC gap on
/// data sampled at n_empirical.
IdentitySuiteResult identity_suite(const oracle::SyntheticModel& model,
                                   const std::vector<ScoringModel>& scorers,
                                   const std::vector<Rate>& rates,
                                   std::size_t n_empirical, SeedSpec seed,
                                   double population_tol = 1e-6,
                                   double empirical_locauc_tol = 5e-3);

/// Study families ----------------------------------------------------------

/// Family for the fast-rate setting: member k swaps a band of width
/// k*step just below the C* boundary for the band just above it, so the
/// excess risk grows quadratically in the swap width while the symmetric
/// difference grows linearly. Member 0 is an optimal scorer.
std::shared_ptr<const ScoringFamily> band_swap_family(
    const oracle::SyntheticModel& model, Rate u0, std::size_t count,
    double step);

/// Family for the slow-rate setting: tent scorers whose top set is a
/// mass-u0 interval (or a pair of intervals for the twin style) centered
/// where the config says. Risks are controlled by the centers; twin/single
/// alternation keeps neighbors in risk geometrically far apart.
std::shared_ptr<const ScoringFamily> tent_family(
    const std::vector<double>& centers, const std::vector<std::string>& styles,
    double half_mass_width);

}  // namespace locrank::experiments
