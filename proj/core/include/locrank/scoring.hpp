#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "locrank/dataset.hpp"

namespace locrank {

class ScoringModel;

/// Named, immutable list of scoring models. FiniteMember refers into one of
/// these; empirical-risk minimization over finite classes scans one.
class ScoringFamily {
 public:
  explicit ScoringFamily(std::vector<ScoringModel> members, std::string name = "");
  std::size_t size() const;
  const ScoringModel& at(std::size_t i) const;
  const std::string& name() const { return name_; }

 private:
  std::vector<ScoringModel> members_;
  std::string name_;
};

/// Continuous piecewise-linear scorer on the real line. Extrapolates beyond
/// the outer breakpoints with the adjacent segment's slope, so the declared
/// slope bounds stay valid on all of R.
struct PiecewiseLinear1D {
  std::vector<double> breakpoints;  // strictly increasing, >= 2
  std::vector<double> values;       // same length
  double slope_min = 0.0;           // m: 0 < m <= |slope| <= M
  double slope_max = 0.0;           // M
};

struct LinearScore {
  std::vector<double> weights;
};

/// Arbitrary 1-d evaluator. `cuts` lists the interior points where the
/// function may jump or change monotonicity direction; between consecutive
/// cuts it must be continuous and monotone (weakly). The oracle integrator
/// relies on that contract.
struct Custom1D {
  std::function<double(double)> fn;
  std::vector<double> cuts;
  std::string name;
};

struct FiniteMember {
  std::shared_ptr<const ScoringFamily> family;
  std::size_t index = 0;
};

/// Evaluable scoring function. The range bound lambda is recorded metadata
/// only: every empirical criterion in this library is rank-based, hence
/// invariant under strictly increasing transforms, so clipping to (0,lambda)
/// would not change anything observable.
class ScoringModel {
 public:
  static ScoringModel piecewise_linear(std::vector<double> breakpoints,
                                       std::vector<double> values,
                                       double slope_min, double slope_max,
                                       double lambda = 1.0);
  static ScoringModel linear(std::vector<double> weights, double lambda = 1.0);
  static ScoringModel custom1d(std::function<double(double)> fn,
                               std::vector<double> cuts = {},
                               std::string name = "custom",
                               double lambda = 1.0);
  static ScoringModel member(std::shared_ptr<const ScoringFamily> family,
                             std::size_t index);

  double evaluate(std::span<const double> x) const;
  double evaluate1d(double x) const;

  /// Expected feature dimension; 0 means "any" (never occurs: 1-d variants
  /// report 1, Linear reports its weight count).
  std::size_t dimension() const;

  double lambda_bound() const { return lambda_; }
  const std::string& name() const { return name_; }

  bool is_piecewise_linear() const;
  bool is_linear() const;
  const PiecewiseLinear1D& as_piecewise_linear() const;
  const LinearScore& as_linear() const;
  const Custom1D* as_custom1d() const;
  const FiniteMember* as_member() const;

  std::string to_json() const;
  static ScoringModel from_json(const std::string& text);

 private:
  using Variant = std::variant<PiecewiseLinear1D, LinearScore, Custom1D, FiniteMember>;
  ScoringModel(Variant v, double lambda, std::string name);
  Variant variant_;
  double lambda_ = 1.0;
  std::string name_;
};

/// Element i equals evaluate(model, row i). Pure in (model, features).
std::vector<double> score_dataset(const ScoringModel& model, const Dataset& data);

}  // namespace locrank
