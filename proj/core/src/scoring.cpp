#include "locrank/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace locrank {

namespace {

void validate_piecewise(const PiecewiseLinear1D& pwl) {
  if (pwl.breakpoints.size() < 2)
    throw std::invalid_argument("PiecewiseLinear1D: need at least 2 breakpoints");
  if (pwl.breakpoints.size() != pwl.values.size())
    throw std::invalid_argument("PiecewiseLinear1D: breakpoints/values size mismatch");
  if (!(pwl.slope_min > 0.0) || !(pwl.slope_max >= pwl.slope_min) ||
      !std::isfinite(pwl.slope_max))
    throw std::invalid_argument("PiecewiseLinear1D: need 0 < m <= M < inf");
  for (std::size_t i = 1; i < pwl.breakpoints.size(); ++i) {
    if (!(pwl.breakpoints[i] > pwl.breakpoints[i - 1]))
      throw std::invalid_argument("PiecewiseLinear1D: breakpoints must be strictly increasing");
    const double slope = (pwl.values[i] - pwl.values[i - 1]) /
                         (pwl.breakpoints[i] - pwl.breakpoints[i - 1]);
    const double mag = std::abs(slope);
    // small slack: slopes are usually derived from the same grid they are
    // checked against
    if (mag < pwl.slope_min * (1.0 - 1e-12) || mag > pwl.slope_max * (1.0 + 1e-12))
      throw std::invalid_argument("PiecewiseLinear1D: segment slope outside [m, M]");
  }
}

double eval_piecewise(const PiecewiseLinear1D& pwl, double x) {
  const auto& b = pwl.breakpoints;
  const auto& v = pwl.values;
  const std::size_t k = b.size();
  std::size_t seg;
  if (x <= b.front()) {
    seg = 0;  // extrapolate with the first segment's slope
  } else if (x >= b.back()) {
    seg = k - 2;  // extrapolate with the last segment's slope
  } else {
    seg = static_cast<std::size_t>(
              std::upper_bound(b.begin(), b.end(), x) - b.begin()) - 1;
  }
  const double t = (x - b[seg]) / (b[seg + 1] - b[seg]);
  return v[seg] + t * (v[seg + 1] - v[seg]);
}

}  // namespace

ScoringFamily::ScoringFamily(std::vector<ScoringModel> members, std::string name)
    : members_(std::move(members)), name_(std::move(name)) {
  if (members_.empty())
    throw std::invalid_argument("ScoringFamily: empty family");
}

std::size_t ScoringFamily::size() const { return members_.size(); }

const ScoringModel& ScoringFamily::at(std::size_t i) const {
  if (i >= members_.size())
    throw std::out_of_range("ScoringFamily: index out of range");
  return members_[i];
}

ScoringModel::ScoringModel(Variant v, double lambda, std::string name)
    : variant_(std::move(v)), lambda_(lambda), name_(std::move(name)) {
  if (!(lambda_ > 0.0))
    throw std::invalid_argument("ScoringModel: lambda must be positive");
}

ScoringModel ScoringModel::piecewise_linear(std::vector<double> breakpoints,
                                            std::vector<double> values,
                                            double slope_min, double slope_max,
                                            double lambda) {
  PiecewiseLinear1D pwl{std::move(breakpoints), std::move(values), slope_min, slope_max};
  validate_piecewise(pwl);
  return ScoringModel(Variant(std::move(pwl)), lambda, "piecewise-linear");
}

ScoringModel ScoringModel::linear(std::vector<double> weights, double lambda) {
  if (weights.empty())
    throw std::invalid_argument("ScoringModel: linear model needs weights");
  return ScoringModel(Variant(LinearScore{std::move(weights)}), lambda, "linear");
}

ScoringModel ScoringModel::custom1d(std::function<double(double)> fn,
                                    std::vector<double> cuts, std::string name,
                                    double lambda) {
  if (!fn) throw std::invalid_argument("ScoringModel: custom1d needs a function");
  std::sort(cuts.begin(), cuts.end());
  std::string label = name;
  return ScoringModel(Variant(Custom1D{std::move(fn), std::move(cuts), std::move(name)}),
                      lambda, std::move(label));
}

ScoringModel ScoringModel::member(std::shared_ptr<const ScoringFamily> family,
                                  std::size_t index) {
  if (!family) throw std::invalid_argument("ScoringModel: null family");
  if (index >= family->size())
    throw std::invalid_argument("ScoringModel: member index out of range");
  std::string name = family->name().empty() ? "member" : family->name();
  name += "[" + std::to_string(index) + "]";
  return ScoringModel(Variant(FiniteMember{std::move(family), index}), 1.0,
                      std::move(name));
}

double ScoringModel::evaluate(std::span<const double> x) const {
  if (x.size() != dimension())
    throw std::invalid_argument("ScoringModel: feature dimension mismatch");
  if (const auto* lin = std::get_if<LinearScore>(&variant_)) {
    double acc = 0.0;
    for (std::size_t j = 0; j < lin->weights.size(); ++j) acc += lin->weights[j] * x[j];
    return acc;
  }
  return evaluate1d(x[0]);
}

double ScoringModel::evaluate1d(double x) const {
  if (const auto* pwl = std::get_if<PiecewiseLinear1D>(&variant_))
    return eval_piecewise(*pwl, x);
  if (const auto* lin = std::get_if<LinearScore>(&variant_)) {
    if (lin->weights.size() != 1)
      throw std::invalid_argument("ScoringModel: linear model is not 1-d");
    return lin->weights[0] * x;
  }
  if (const auto* c = std::get_if<Custom1D>(&variant_)) return c->fn(x);
  const auto& m = std::get<FiniteMember>(variant_);
  return m.family->at(m.index).evaluate1d(x);
}

std::size_t ScoringModel::dimension() const {
  if (const auto* lin = std::get_if<LinearScore>(&variant_)) return lin->weights.size();
  if (const auto* m = std::get_if<FiniteMember>(&variant_))
    return m->family->at(m->index).dimension();
  return 1;
}

bool ScoringModel::is_piecewise_linear() const {
  return std::holds_alternative<PiecewiseLinear1D>(variant_);
}

bool ScoringModel::is_linear() const {
  return std::holds_alternative<LinearScore>(variant_);
}

const PiecewiseLinear1D& ScoringModel::as_piecewise_linear() const {
  return std::get<PiecewiseLinear1D>(variant_);
}

const LinearScore& ScoringModel::as_linear() const {
  return std::get<LinearScore>(variant_);
}

const Custom1D* ScoringModel::as_custom1d() const {
  return std::get_if<Custom1D>(&variant_);
}

const FiniteMember* ScoringModel::as_member() const {
  return std::get_if<FiniteMember>(&variant_);
}

std::string ScoringModel::to_json() const {
  nlohmann::json j;
  if (const auto* pwl = std::get_if<PiecewiseLinear1D>(&variant_)) {
    j["kind"] = "piecewise-linear";
    j["breakpoints"] = pwl->breakpoints;
    j["values"] = pwl->values;
    j["slope_min"] = pwl->slope_min;
    j["slope_max"] = pwl->slope_max;
  } else if (const auto* lin = std::get_if<LinearScore>(&variant_)) {
    j["kind"] = "linear";
    j["weights"] = lin->weights;
  } else if (const auto* c = std::get_if<Custom1D>(&variant_)) {
    j["kind"] = "custom";
    j["name"] = c->name;
  } else {
    const auto& m = std::get<FiniteMember>(variant_);
    j["kind"] = "member";
    j["family"] = m.family->name();
    j["index"] = m.index;
  }
  j["lambda"] = lambda_;
  return j.dump();
}

ScoringModel ScoringModel::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  const double lambda = j.value("lambda", 1.0);
  if (kind == "piecewise-linear") {
    return piecewise_linear(j.at("breakpoints").get<std::vector<double>>(),
                            j.at("values").get<std::vector<double>>(),
                            j.value("slope_min", 1e-9),
                            j.value("slope_max", 1e9), lambda);
  }
  if (kind == "linear")
    return linear(j.at("weights").get<std::vector<double>>(), lambda);
  throw std::invalid_argument("ScoringModel: unsupported kind '" + kind +
                              "' in JSON spec");
}

std::vector<double> score_dataset(const ScoringModel& model, const Dataset& data) {
  if (data.rows() > 0 && data.cols() != model.dimension())
    throw std::invalid_argument("score_dataset: feature dimension mismatch");
  std::vector<double> scores(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i)
    scores[i] = model.evaluate(data.row(i));
  return scores;
}

}  // namespace locrank
