#include "locrank/erm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "locrank/classify.hpp"
#include "locrank/rankcrit.hpp"

namespace locrank::erm {

Criterion criterion_from_name(const std::string& name) {
  if (name == "l_hat") return Criterion::LHat;
  if (name == "m_hat") return Criterion::MHat;
  if (name == "locauc") return Criterion::LocAuc;
  if (name == "w_hat") return Criterion::WHat;
  throw std::invalid_argument("unknown criterion '" + name +
                              "' (expected l_hat, m_hat, locauc or w_hat)");
}

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::LHat: return "l_hat";
    case Criterion::MHat: return "m_hat";
    case Criterion::LocAuc: return "locauc";
    case Criterion::WHat: return "w_hat";
  }
  return "?";
}

bool criterion_maximizes(Criterion c) {
  return c == Criterion::LocAuc || c == Criterion::WHat;
}

double evaluate_criterion(Criterion c, Rate u0, std::span<const double> scores,
                          std::span<const int> labels) {
  switch (c) {
    case Criterion::LHat:
      return hat_L(scores, labels, u0).l_hat;
    case Criterion::MHat:
      return hat_M(scores, labels, u0);
    case Criterion::LocAuc:
      return hat_locauc(scores, labels, u0);
    case Criterion::WHat: {
      const double t = t_local(scores, labels, u0);
      std::size_t pos = 0;
      for (int y : labels) pos += (y == 1);
      if (pos == 0) throw std::invalid_argument("w_hat undefined: no positives");
      return t / static_cast<double>(pos);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

/// Search engine state: minimizes internally, traces reported values.
struct Search {
  Criterion criterion;
  Rate u0;
  const Dataset& data;
  std::size_t budget;
  std::size_t evaluations = 0;
  std::vector<TracePoint> trace;
  double best_internal = std::numeric_limits<double>::infinity();

  Search(Criterion c, Rate r, const Dataset& d, std::size_t b)
      : criterion(c), u0(r), data(d), budget(b) {}

  bool exhausted() const { return evaluations >= budget; }

  /// Returns the internal (minimized) value; records the trace on strict
  /// improvement.
  double evaluate(const ScoringModel& model) {
    const auto scores = score_dataset(model, data);
    const double reported =
        evaluate_criterion(criterion, u0, scores, data.labels());
    const double internal = criterion_maximizes(criterion) ? -reported : reported;
    ++evaluations;
    if (internal < best_internal) {
      best_internal = internal;
      trace.push_back(TracePoint{evaluations, reported});
    }
    return internal;
  }
};

double reported_value(Criterion c, double internal) {
  return criterion_maximizes(c) ? -internal : internal;
}

/// Slope magnitudes on the grid, plus signs: the candidate parameterization
/// for the piecewise family. Values follow from slopes, so the bounds hold
/// by construction.
struct PiecewiseState {
  std::vector<double> breakpoints;
  std::vector<int> sign;         // per segment
  std::vector<std::size_t> mag;  // grid indices per segment

  ScoringModel to_model(const PiecewiseFamilySpec& spec) const {
    std::vector<double> values(breakpoints.size(), 0.0);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
      const double slope = static_cast<double>(sign[i]) * magnitude(spec, mag[i]);
      values[i + 1] = values[i] + slope * (breakpoints[i + 1] - breakpoints[i]);
    }
    return ScoringModel::piecewise_linear(breakpoints, values, spec.slope_min,
                                          spec.slope_max);
  }

  static double magnitude(const PiecewiseFamilySpec& spec, std::size_t idx) {
    if (spec.grid_resolution <= 1) return spec.slope_min;
    const double t = static_cast<double>(idx) /
                     static_cast<double>(spec.grid_resolution - 1);
    return spec.slope_min + t * (spec.slope_max - spec.slope_min);
  }
};

std::vector<std::size_t> split_budget(std::size_t budget, std::size_t restarts) {
  std::vector<std::size_t> out(restarts, budget / restarts);
  for (std::size_t i = 0; i < budget % restarts; ++i) ++out[i];
  return out;
}

}  // namespace

ErmResult erm_finite(const ErmProblem& problem, const Dataset& data) {
  const auto* spec = std::get_if<FiniteFamilySpec>(&problem.family);
  if (!spec || !spec->family)
    throw std::invalid_argument("erm_finite: problem has no finite family");
  const auto& family = *spec->family;
  if (family.size() == 0) throw std::invalid_argument("erm_finite: empty family");
  if (problem.budget < family.size())
    throw std::invalid_argument(
        "erm_finite: budget smaller than the family (exhaustive scan required)");

  Search search(problem.criterion, problem.u0, data, family.size());
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double before = search.best_internal;
    const double value = search.evaluate(family.at(i));
    if (value < before) best_index = i;  // ties keep the lowest index
  }
  // hand back the member reference so callers can recover the index
  ErmResult out{ScoringModel::member(spec->family, best_index),
                reported_value(problem.criterion, search.best_internal),
                search.evaluations, std::move(search.trace)};
  return out;
}

ErmResult erm_piecewise(const ErmProblem& problem, const Dataset& data) {
  const auto* spec = std::get_if<PiecewiseFamilySpec>(&problem.family);
  if (!spec)
    throw std::invalid_argument("erm_piecewise: problem has no piecewise family");
  if (data.cols() != 1)
    throw std::invalid_argument("erm_piecewise: needs 1-d features");
  if (spec->breakpoint_count < 2)
    throw std::invalid_argument("erm_piecewise: need at least 2 breakpoints");
  if (!(spec->slope_min > 0.0) || !(spec->slope_max >= spec->slope_min))
    throw std::invalid_argument("erm_piecewise: need 0 < m <= M");
  if (problem.budget == 0) throw std::invalid_argument("erm_piecewise: zero budget");

  double lo = data.feature(0, 0), hi = lo;
  for (std::size_t i = 1; i < data.rows(); ++i) {
    lo = std::min(lo, data.feature(i, 0));
    hi = std::max(hi, data.feature(i, 0));
  }
  if (!(hi > lo)) hi = lo + 1.0;  // degenerate data range

  std::vector<double> breakpoints(spec->breakpoint_count);
  for (std::size_t i = 0; i < breakpoints.size(); ++i)
    breakpoints[i] = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(breakpoints.size() - 1);
  const std::size_t segments = breakpoints.size() - 1;

  const std::size_t restarts = std::max<std::size_t>(1, problem.restarts);
  const auto budgets = split_budget(problem.budget, restarts);

  ErmResult best{ScoringModel::linear({1.0}), 0.0, 0, {}};
  double best_internal = std::numeric_limits<double>::infinity();
  bool have_best = false;
  std::size_t total_evaluations = 0;
  std::vector<TracePoint> merged_trace;

  for (std::size_t r = 0; r < restarts; ++r) {
    if (budgets[r] == 0) continue;
    auto rng = child_stream(problem.seed, r);
    Search search(problem.criterion, problem.u0, data, budgets[r]);

    PiecewiseState state;
    state.breakpoints = breakpoints;
    state.sign.resize(segments);
    state.mag.resize(segments);
    for (std::size_t i = 0; i < segments; ++i) {
      state.sign[i] = rng.bernoulli(0.5) ? 1 : -1;
      state.mag[i] = static_cast<std::size_t>(rng.uniform01() *
                                              static_cast<double>(spec->grid_resolution));
      state.mag[i] = std::min(state.mag[i], spec->grid_resolution - 1);
    }

    double current = search.evaluate(state.to_model(*spec));
    PiecewiseState incumbent = state;
    while (!search.exhausted()) {
      PiecewiseState proposal = incumbent;
      const std::size_t seg = static_cast<std::size_t>(
          rng.uniform01() * static_cast<double>(segments)) % segments;
      if (rng.bernoulli(0.3)) {
        proposal.sign[seg] = -proposal.sign[seg];
      } else {
        std::size_t m = static_cast<std::size_t>(
            rng.uniform01() * static_cast<double>(spec->grid_resolution));
        m = std::min(m, spec->grid_resolution - 1);
        if (m == proposal.mag[seg] && spec->grid_resolution > 1)
          m = (m + 1) % spec->grid_resolution;
        proposal.mag[seg] = m;
      }
      const double value = search.evaluate(proposal.to_model(*spec));
      if (value < current) {  // strict improvement only
        current = value;
        incumbent = proposal;
      }
    }

    total_evaluations += search.evaluations;
    // reduce by (value, restart index), so completion order cannot matter
    if (!have_best || current < best_internal) {
      have_best = true;
      best_internal = current;
      best.best = incumbent.to_model(*spec);
      merged_trace = std::move(search.trace);
    }
  }

  best.best_value = reported_value(problem.criterion, best_internal);
  best.evaluations = total_evaluations;
  best.trace = std::move(merged_trace);
  return best;
}

ErmResult erm_linear(const ErmProblem& problem, const Dataset& data) {
  const auto* spec = std::get_if<LinearFamilySpec>(&problem.family);
  if (!spec)
    throw std::invalid_argument("erm_linear: problem has no linear family");
  const std::size_t d = spec->dimension;
  if (d == 0 || data.cols() != d)
    throw std::invalid_argument("erm_linear: dimension mismatch");
  if (problem.budget == 0) throw std::invalid_argument("erm_linear: zero budget");

  const auto normalize = [](std::vector<double> w) {
    double norm = 0.0;
    for (double v : w) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : w) v /= norm;
    else
      w[0] = 1.0;
    return w;
  };

  const std::size_t restarts = std::max<std::size_t>(1, problem.restarts);
  const auto budgets = split_budget(problem.budget, restarts);

  double best_internal = std::numeric_limits<double>::infinity();
  std::vector<double> best_w(d, 0.0);
  best_w[0] = 1.0;
  bool have_best = false;
  std::size_t total_evaluations = 0;
  std::vector<TracePoint> merged_trace;

  for (std::size_t r = 0; r < restarts; ++r) {
    if (budgets[r] == 0) continue;
    auto rng = child_stream(problem.seed, r);
    Search search(problem.criterion, problem.u0, data, budgets[r]);

    // phase 1: random directions on the sphere (~2/3 of the budget)
    std::vector<double> incumbent(d, 0.0);
    incumbent[0] = 1.0;
    double current = std::numeric_limits<double>::infinity();
    const std::size_t explore = std::max<std::size_t>(1, budgets[r] * 2 / 3);
    while (search.evaluations < explore && !search.exhausted()) {
      std::vector<double> w(d);
      for (double& v : w) v = rng.normal();
      w = normalize(std::move(w));
      const double value = search.evaluate(ScoringModel::linear(w));
      if (value < current) {
        current = value;
        incumbent = std::move(w);
      }
    }

    // phase 2: coordinate-wise refinement with shrinking steps
    double step = 0.25;
    while (!search.exhausted() && step > 1e-4) {
      bool improved = false;
      for (std::size_t j = 0; j < d && !search.exhausted(); ++j) {
        for (int dir : {+1, -1}) {
          if (search.exhausted()) break;
          std::vector<double> w = incumbent;
          w[j] += dir * step;
          w = normalize(std::move(w));
          const double value = search.evaluate(ScoringModel::linear(w));
          if (value < current) {
            current = value;
            incumbent = std::move(w);
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }

    total_evaluations += search.evaluations;
    if (!have_best || current < best_internal) {
      have_best = true;
      best_internal = current;
      best_w = incumbent;
      merged_trace = std::move(search.trace);
    }
  }

  ErmResult out{ScoringModel::linear(best_w),
                reported_value(problem.criterion, best_internal),
                total_evaluations, std::move(merged_trace)};
  return out;
}

ErmResult run(const ErmProblem& problem, const Dataset& data) {
  if (std::holds_alternative<FiniteFamilySpec>(problem.family))
    return erm_finite(problem, data);
  if (std::holds_alternative<PiecewiseFamilySpec>(problem.family))
    return erm_piecewise(problem, data);
  return erm_linear(problem, data);
}

std::string ErmResult::to_json() const {
  std::ostringstream os;
  char buf[64];
  os << "{\"best_model\":" << best.to_json() << ",";
  std::snprintf(buf, sizeof buf, "%.17g", best_value);
  os << "\"best_value\":" << buf << ",";
  os << "\"evaluations\":" << evaluations << ",\"trace\":[";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) os << ',';
    std::snprintf(buf, sizeof buf, "%.17g", trace[i].value);
    os << "[" << trace[i].evaluation << "," << buf << "]";
  }
  os << "]}";
  return os.str();
}

}  // namespace locrank::erm
