#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "locrank/dataset.hpp"
#include "locrank/rate.hpp"
#include "locrank/rng.hpp"
#include "locrank/scoring.hpp"

namespace locrank::erm {

/// LHat and MHat are minimized; LocAuc and WHat are maximized (negated
/// internally so the search engine only ever minimizes).
enum class Criterion { LHat, MHat, LocAuc, WHat };

Criterion criterion_from_name(const std::string& name);
std::string criterion_name(Criterion c);
bool criterion_maximizes(Criterion c);

/// Criterion value in its reported orientation (LocAuc/WHat larger-better).
double evaluate_criterion(Criterion c, Rate u0, std::span<const double> scores,
                          std::span<const int> labels);

struct FiniteFamilySpec {
  std::shared_ptr<const ScoringFamily> family;
};

/// Continuous piecewise-linear candidates on equispaced breakpoints over the
/// data range. Parameterized by per-segment signed slopes drawn from a grid
/// of `grid_resolution` magnitudes in [slope_min, slope_max], so every
/// candidate respects the slope bounds by construction.
struct PiecewiseFamilySpec {
  std::size_t breakpoint_count = 4;  // >= 2
  std::size_t grid_resolution = 8;   // magnitudes per sign
  double slope_min = 0.5;
  double slope_max = 2.0;
};

struct LinearFamilySpec {
  std::size_t dimension = 1;
};

struct ErmProblem {
  std::variant<FiniteFamilySpec, PiecewiseFamilySpec, LinearFamilySpec> family;
  Criterion criterion = Criterion::LHat;
  Rate u0 = Rate(0.5);
  std::size_t budget = 1000;  // criterion evaluations, total across restarts
  std::size_t restarts = 4;
  SeedSpec seed;
};

struct TracePoint {
  std::size_t evaluation = 0;  // 1-based evaluation counter
  double value = 0.0;          // incumbent, reported orientation
};

struct ErmResult {
  ScoringModel best;
  double best_value = 0.0;
  std::size_t evaluations = 0;
  std::vector<TracePoint> trace;
  std::string to_json() const;
};

/// Exhaustive scan; ties broken by lowest family index.
ErmResult erm_finite(const ErmProblem& problem, const Dataset& data);

/// Multi-start randomized local search over 1-d piecewise-linear candidates:
/// propose single-segment slope moves, accept strict improvement only.
/// Deterministic given the seed; restarts reduce by (value, restart index).
ErmResult erm_piecewise(const ErmProblem& problem, const Dataset& data);

/// Random directions on the unit sphere plus coordinate-wise refinement.
/// The criteria depend on w only through the ranking of w.x, so the search
/// stays on the sphere.
ErmResult erm_linear(const ErmProblem& problem, const Dataset& data);

/// Dispatch on the family variant.
ErmResult run(const ErmProblem& problem, const Dataset& data);

}  // namespace locrank::erm
