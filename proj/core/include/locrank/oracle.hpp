#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "locrank/classify.hpp"
#include "locrank/dataset.hpp"
#include "locrank/rate.hpp"
#include "locrank/rng.hpp"
#include "locrank/scoring.hpp"

namespace locrank::oracle {

/// Raised when quadrature cannot meet its tolerance or when two independent
/// computation routes disagree beyond tolerance.
struct oracle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sorted disjoint closed intervals inside the model support. Endpoint
/// inclusion is immaterial: every marginal here is atomless.
using IntervalList = std::vector<std::pair<double, double>>;

IntervalList interval_union(const IntervalList& a, const IntervalList& b);
IntervalList interval_intersection(const IntervalList& a, const IntervalList& b);
IntervalList interval_difference(const IntervalList& a, const IntervalList& b);
IntervalList interval_symmetric_difference(const IntervalList& a, const IntervalList& b);
double interval_total_length(const IntervalList& a);
bool interval_contains(const IntervalList& a, double x);

/// Marginal distribution of X on a compact interval. Uniform, or a mixture
/// of two Gaussians truncated to [lo,hi] so every integral has compact
/// support. cdf/mass are closed form; sampling is inverse-cdf.
class Marginal {
 public:
  static Marginal uniform(double lo, double hi);
  static Marginal gaussian_mixture(double w1, double mean1, double sd1,
                                   double mean2, double sd2, double lo,
                                   double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double pdf(double x) const;
  double cdf(double x) const;
  double mass(double a, double b) const;  // mu([a,b]), clamped to support
  double sample(RandomStream& rng) const;
  bool is_uniform() const { return kind_ == Kind::Uniform; }
  std::string describe() const;

 private:
  enum class Kind { Uniform, Mixture };
  Kind kind_ = Kind::Uniform;
  double lo_ = 0.0, hi_ = 1.0;
  double w1_ = 1.0, mean1_ = 0.0, sd1_ = 1.0, mean2_ = 0.0, sd2_ = 1.0;
  double norm_ = 1.0;  // mixture mass inside [lo,hi]
};

/// Posterior probability eta(x) = P(Y=1 | X=x), as a named preset.
/// cuts() lists interior points where smoothness or monotonicity breaks
/// (step-smooth has genuinely flat pieces outside its ramp).
class Eta {
 public:
  static Eta linear(double lo, double hi);
  static Eta logistic(double a, double b);
  static Eta step_smooth(double q, double w);
  static Eta constant(double c);

  double operator()(double x) const { return fn_(x); }
  const std::vector<double>& cuts() const { return cuts_; }
  std::string describe() const { return description_; }

 private:
  std::function<double(double)> fn_;
  std::vector<double> cuts_;
  std::string description_;
};

/// Generative model with known (mu, eta): the source of every population
/// quantity. p = E[eta(X)] is integrated at construction. The optional
/// noise exponent documents the low-noise condition; it is metadata only.
class SyntheticModel {
 public:
  SyntheticModel(Marginal marginal, Eta eta,
                 std::optional<double> noise_exponent_alpha = std::nullopt);

  const Marginal& marginal() const { return marginal_; }
  double eta(double x) const { return eta_(x); }
  const Eta& eta_spec() const { return eta_; }
  double p() const { return p_; }
  std::optional<double> noise_exponent_alpha() const { return noise_alpha_; }

  /// X ~ mu, Y = +1 with probability eta(X). One column of features.
  Dataset sample(std::size_t n, RandomStream& rng) const;

  /// integral of eta d(mu) over [a,b] (and its complement weight).
  double pos_mass(double a, double b) const;
  double neg_mass(double a, double b) const;
  double pos_mass(const IntervalList& iv) const;
  double neg_mass(const IntervalList& iv) const;

  std::string describe() const;

 private:
  Marginal marginal_;
  Eta eta_;
  double p_ = 0.0;
  std::optional<double> noise_alpha_;
};

/// Piecewise-monotone view of a 1-d scorer over the model support, used for
/// preimages {s <= z} etc. via per-piece bisection. Built from a
/// ScoringModel's declared cuts; throws if a piece is detectably
/// non-monotone.
class Score1D {
 public:
  Score1D(const ScoringModel& model, const Marginal& domain);

  double operator()(double x) const { return fn_(x); }

  enum class Rel { LE, LT, GE, GT };
  IntervalList preimage(double z, Rel rel) const;

  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }
  const std::vector<double>& cut_points() const { return cut_points_; }

 private:
  struct Piece {
    double lo, hi;     // [lo, hi); last piece closed
    double v_lo, v_hi; // values just inside the ends
    int dir;           // +1 increasing, -1 decreasing, 0 constant
  };
  double root_in_piece(const Piece& piece, double z) const;
  std::function<double(double)> fn_;
  std::vector<Piece> pieces_;
  std::vector<double> cut_points_;
  double min_value_ = 0.0, max_value_ = 0.0;
};

/// All population quantities for one (model, s, u0). k and k_prime are taken
/// at v = 1 - u0. locauc is integrated via int_Q^inf H_s dG_s; r_local via
/// the pair double integral; k_prime by centered finite difference in v.
struct TrueQuantities {
  double q = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double l = 0.0;
  double locauc = 0.0;
  double w = 0.0;
  double r_local = 0.0;
  double m = 0.0;
  double k = 0.0;
  double k_prime = 0.0;
  /// Set when the score distribution carries an atom at the quantile, i.e.
  /// the mass constraint mu{s >= q} = u0 fails; identity checks that assume
  /// the constraint are skipped by callers in that case.
  bool degenerate_quantile = false;
};

/// F_s(z), G_s(z), H_s(z): population cdfs of s(X), overall and per class.
double score_cdf(const SyntheticModel& model, const Score1D& s, double z);
double score_cdf_pos(const SyntheticModel& model, const Score1D& s, double z);
double score_cdf_neg(const SyntheticModel& model, const Score1D& s, double z);

/// Q(s,v) = F_s^{-1}(v), generalized inverse by bisection on the integrated
/// cdf. v in (0,1).
double true_quantile(const SyntheticModel& model, const ScoringModel& s, double v);

TrueQuantities true_report(const SyntheticModel& model, const ScoringModel& s,
                           Rate u0);

/// K(s,v), K'(s,v), Q(s,v) packaged for the decomposition estimators.
PopulationPoint population_point(const SyntheticModel& model,
                                 const ScoringModel& s, double v);

/// LocAUC computed through the pair double integral (independent of the
/// H dG route inside true_report); used for dual-route agreement checks.
double locauc_via_pairs(const SyntheticModel& model, const ScoringModel& s,
                        Rate u0);

/// Truncated AUC int_0^{alpha(s,u0)} beta(s,a) da via its pair-probability
/// representation: P(positive outscores negative, both in the top set).
double trunc_auc_population(const SyntheticModel& model, const ScoringModel& s,
                            Rate u0);

struct BayesReport {
  double q_eta = 0.0;          // Q(eta, 1-u0)
  double l_star = 0.0;         // closed-form optimal risk
  double l_star_direct = 0.0;  // direct integration of the error of g*
  double difference = 0.0;     // |l_star - l_star_direct|
  IntervalList c_star;         // {x : eta(x) >= q_eta}
  bool degenerate = false;     // eta(X) has an atom at q_eta
  bool contains(double x) const { return interval_contains(c_star, x); }
};

/// Both routes to L*. Throws on disagreement beyond tolerance unless the
/// quantile is degenerate (flat eta), where the closed form's premise
/// mu(C*) = u0 fails and the difference is reported instead.
BayesReport bayes_report(const SyntheticModel& model, Rate u0,
                         double tolerance = 1e-6);

/// L(s) - L*, computed both as 2 E(|eta - q| I_{C* delta C_s}) and as
/// true_report(s).l - l_star; agreement asserted to the tolerance. The two
/// routes are exposed through the optional out-parameters.
double excess_risk(const SyntheticModel& model, const ScoringModel& s, Rate u0,
                   double tolerance = 1e-6, double* via_delta_out = nullptr,
                   double* via_risk_out = nullptr);

/// An optimal scoring function: eta on C*, a constant strictly below
/// inf_{C*} eta elsewhere.
ScoringModel optimal_scoring(const SyntheticModel& model, Rate u0);

/// The constant C(p,u0) in the linear relation tying 2pW to L and R:
/// C(p,u0) = (p+u0) - (p+u0)^2/4. Derived by eliminating beta from the
/// W and LocAUC relations with the corrected mass-constraint identity;
/// the randomized identity tests keep it honest.
double w_constant(double p, double u0);

}  // namespace locrank::oracle
