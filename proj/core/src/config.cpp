#include "locrank/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace locrank::config {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string key(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "." + name;
}

oracle::Marginal marginal_from_toml(const toml::Table& t, const std::string& prefix) {
  const std::string kind = t.string(key(prefix, "kind"));
  const double lo = t.number_or(key(prefix, "lo"), 0.0);
  const double hi = t.number_or(key(prefix, "hi"), 1.0);
  if (kind == "uniform") return oracle::Marginal::uniform(lo, hi);
  if (kind == "gauss-mixture")
    return oracle::Marginal::gaussian_mixture(
        t.number(key(prefix, "w1")), t.number(key(prefix, "mean1")),
        t.number(key(prefix, "sd1")), t.number(key(prefix, "mean2")),
        t.number(key(prefix, "sd2")), lo, hi);
  throw config_error("unknown marginal kind '" + kind + "'");
}

oracle::Eta eta_from_toml(const toml::Table& t, const std::string& prefix,
                          double lo, double hi) {
  const std::string kind = t.string(key(prefix, "kind"));
  if (kind == "linear") return oracle::Eta::linear(lo, hi);
  if (kind == "logistic")
    return oracle::Eta::logistic(t.number(key(prefix, "a")),
                                 t.number(key(prefix, "b")));
  if (kind == "step-smooth")
    return oracle::Eta::step_smooth(t.number(key(prefix, "q")),
                                    t.number(key(prefix, "w")));
  if (kind == "constant")
    return oracle::Eta::constant(t.number(key(prefix, "c")));
  throw config_error("unknown eta kind '" + kind + "'");
}

oracle::SyntheticModel model_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open model config " + path);
  nlohmann::json j;
  in >> j;
  const auto& jm = j.at("marginal");
  const std::string kind = jm.at("kind").get<std::string>();
  const double lo = jm.value("lo", 0.0);
  const double hi = jm.value("hi", 1.0);
  oracle::Marginal marginal = oracle::Marginal::uniform(0.0, 1.0);
  if (kind == "uniform") {
    marginal = oracle::Marginal::uniform(lo, hi);
  } else if (kind == "gauss-mixture") {
    marginal = oracle::Marginal::gaussian_mixture(
        jm.at("w1").get<double>(), jm.at("mean1").get<double>(),
        jm.at("sd1").get<double>(), jm.at("mean2").get<double>(),
        jm.at("sd2").get<double>(), lo, hi);
  } else {
    throw config_error("unknown marginal kind '" + kind + "'");
  }
  const auto& je = j.at("eta");
  const std::string ekind = je.at("kind").get<std::string>();
  oracle::Eta eta = oracle::Eta::linear(lo, hi);
  if (ekind == "linear") {
    eta = oracle::Eta::linear(lo, hi);
  } else if (ekind == "logistic") {
    eta = oracle::Eta::logistic(je.at("a").get<double>(), je.at("b").get<double>());
  } else if (ekind == "step-smooth") {
    eta = oracle::Eta::step_smooth(je.at("q").get<double>(), je.at("w").get<double>());
  } else if (ekind == "constant") {
    eta = oracle::Eta::constant(je.at("c").get<double>());
  } else {
    throw config_error("unknown eta kind '" + ekind + "'");
  }
  std::optional<double> alpha;
  if (j.contains("noise_exponent_alpha"))
    alpha = j.at("noise_exponent_alpha").get<double>();
  return oracle::SyntheticModel(marginal, eta, alpha);
}

Rate rate_from(const toml::Table& t, const std::string& k) {
  if (t.has(k)) {
    // allow the string "global"
    try {
      return Rate(t.number(k));
    } catch (const toml::parse_error&) {
      if (t.string(k) == "global") return Rate::global();
      throw;
    }
  }
  throw config_error("missing rate key '" + k + "'");
}

std::vector<std::size_t> n_grid_from(const toml::Table& t, const std::string& k) {
  std::vector<std::size_t> out;
  for (double v : t.number_array(k)) {
    if (!(v >= 1.0) || v != std::floor(v))
      throw config_error("grid n values must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (!std::is_sorted(out.begin(), out.end()))
    throw config_error("grid n values must be ascending");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);
  out << content;
}

std::shared_ptr<const ScoringFamily> family_from_toml(
    const toml::Table& t, const std::string& prefix,
    const oracle::SyntheticModel& model, Rate u0) {
  const std::string kind = t.string(key(prefix, "kind"));
  if (kind == "band_swap") {
    return experiments::band_swap_family(
        model, u0, static_cast<std::size_t>(t.integer(key(prefix, "count"))),
        t.number(key(prefix, "step")));
  }
  if (kind == "tents") {
    std::vector<std::string> styles;
    if (t.has(key(prefix, "styles"))) styles = t.string_array(key(prefix, "styles"));
    return experiments::tent_family(t.number_array(key(prefix, "centers")), styles,
                                    t.number_or(key(prefix, "twin_offset"), 0.1));
  }
  throw config_error("unknown family kind '" + kind + "'");
}

}  // namespace

oracle::SyntheticModel model_from_toml(const toml::Table& t, const std::string& prefix) {
  auto marginal = marginal_from_toml(t, key(prefix, "marginal"));
  auto eta = eta_from_toml(t, key(prefix, "eta"), marginal.lo(), marginal.hi());
  std::optional<double> alpha;
  if (t.has(key(prefix, "noise_exponent_alpha")))
    alpha = t.number(key(prefix, "noise_exponent_alpha"));
  return oracle::SyntheticModel(std::move(marginal), std::move(eta), alpha);
}

oracle::SyntheticModel model_from_file(const std::string& path) {
  if (ends_with(path, ".json")) return model_from_json(path);
  return model_from_toml(toml::Table::parse_file(path), "");
}

ScoringModel score_from_toml(const toml::Table& t, const std::string& prefix) {
  const std::string kind = t.string(key(prefix, "kind"));
  if (kind == "piecewise-linear")
    return ScoringModel::piecewise_linear(
        t.number_array(key(prefix, "breakpoints")),
        t.number_array(key(prefix, "values")),
        t.number_or(key(prefix, "slope_min"), 1e-9),
        t.number_or(key(prefix, "slope_max"), 1e9));
  if (kind == "linear") return ScoringModel::linear(t.number_array(key(prefix, "weights")));
  throw config_error("unknown score kind '" + kind + "'");
}

erm::ErmProblem erm_problem_from_toml(const toml::Table& t, const std::string& prefix) {
  erm::ErmProblem problem;
  const std::string kind = t.string(key(prefix, "family"));
  if (kind == "piecewise") {
    erm::PiecewiseFamilySpec spec;
    spec.breakpoint_count =
        static_cast<std::size_t>(t.integer_or(key(prefix, "breakpoints"), 4));
    spec.grid_resolution =
        static_cast<std::size_t>(t.integer_or(key(prefix, "resolution"), 8));
    spec.slope_min = t.number_or(key(prefix, "slope_min"), 0.5);
    spec.slope_max = t.number_or(key(prefix, "slope_max"), 2.0);
    problem.family = spec;
  } else if (kind == "linear") {
    problem.family = erm::LinearFamilySpec{
        static_cast<std::size_t>(t.integer_or(key(prefix, "dimension"), 1))};
  } else {
    throw config_error("erm config: family must be piecewise or linear");
  }
  problem.criterion = erm::criterion_from_name(t.string(key(prefix, "criterion")));
  problem.u0 = rate_from(t, key(prefix, "u0"));
  problem.budget = static_cast<std::size_t>(t.integer_or(key(prefix, "budget"), 1000));
  problem.restarts = static_cast<std::size_t>(t.integer_or(key(prefix, "restarts"), 4));
  problem.seed = SeedSpec{static_cast<std::uint64_t>(t.integer_or(key(prefix, "seed"), 1))};
  return problem;
}

int run_rates(const std::string& config_path, const std::string& out_prefix,
              std::size_t workers, std::ostream& log) {
  const auto t = toml::Table::parse_file(config_path);
  experiments::RateStudySetup setup{
      model_from_toml(t, "model"),
      nullptr,
      erm::criterion_from_name(t.string("criterion.name")),
      rate_from(t, "criterion.u0"),
      n_grid_from(t, "grid.n"),
      static_cast<std::size_t>(t.integer("grid.reps")),
      SeedSpec{static_cast<std::uint64_t>(t.integer("grid.seed"))},
      t.string_or("grid.reference", "bayes") == "bayes"
          ? experiments::Reference::Bayes
          : experiments::Reference::FamilyInf,
      {-0.9, -0.45},
      workers,
      t.string_or("grid.label", "rates")};
  const auto band = t.number_array("grid.slope_band");
  if (band.size() != 2) throw config_error("grid.slope_band needs two entries");
  setup.slope_band = {band[0], band[1]};
  setup.family = family_from_toml(t, "family", setup.model, setup.u0);

  const auto result = experiments::rate_study(setup);
  write_file(out_prefix + "_summary.json", result.to_json());
  write_file(out_prefix + "_raw.csv", result.raw_csv());

  log << "rate study [" << setup.label << "]: " << result.config_echo << "\n";
  log << "  n        mean_excess   stderr\n";
  for (std::size_t i = 0; i < result.n_grid.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-8zu %-13.6g %-13.6g\n",
                  result.n_grid[i], result.mean[i], result.standard_error[i]);
    log << line;
  }
  if (!result.slope_defined) {
    log << "  warning: slope undefined for this grid/replication count\n";
    return 0;
  }
  log << "  slope " << fmt(result.slope) << " (stderr " << fmt(result.slope_stderr)
      << "), band [" << fmt(result.slope_band[0]) << ", " << fmt(result.slope_band[1])
      << "] -> " << (result.band_pass ? "PASS" : "FAIL") << "\n";
  if (!result.band_pass) {
    log << "  failing band: slope outside [" << fmt(result.slope_band[0]) << ", "
        << fmt(result.slope_band[1]) << "]\n";
    return 1;
  }
  return 0;
}

int run_decomp(const std::string& config_path, const std::string& out_prefix,
               std::size_t workers, std::ostream& log) {
  const auto t = toml::Table::parse_file(config_path);
  experiments::DecompStudySetup setup{
      model_from_toml(t, "model"),
      score_from_toml(t, "score"),
      t.number("grid.v"),
      n_grid_from(t, "grid.n"),
      static_cast<std::size_t>(t.integer("grid.reps")),
      SeedSpec{static_cast<std::uint64_t>(t.integer("grid.seed"))},
      {-1.4, -0.6},
      t.number_or("grid.var_rel_tol", 0.10),
      static_cast<std::size_t>(t.integer_or("grid.var_min_n", 1000)),
      workers,
      t.string_or("grid.label", "decomp")};
  if (t.has("grid.lambda_slope_band")) {
    const auto band = t.number_array("grid.lambda_slope_band");
    if (band.size() != 2)
      throw config_error("grid.lambda_slope_band needs two entries");
    setup.lambda_slope_band = {band[0], band[1]};
  }

  const auto result = experiments::decomposition_study(setup);
  write_file(out_prefix + "_summary.json", result.to_json());
  write_file(out_prefix + "_raw.csv", result.raw_csv());

  log << "decomposition study [" << setup.label << "]: " << result.config_echo << "\n";
  log << "  n        median|Ln|    n*Var(Zn)   (sigma^2 = " << fmt(result.sigma_sq_ref)
      << ")\n";
  for (std::size_t i = 0; i < result.n_grid.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-8zu %-13.6g %-13.6g\n", result.n_grid[i],
                  result.median_abs_lambda[i], result.n_var_zn[i]);
    log << line;
  }
  if (!result.slope_defined)
    log << "  warning: lambda slope undefined for this grid/replication count\n";
  else
    log << "  lambda slope " << fmt(result.lambda_slope) << ", band ["
        << fmt(result.lambda_slope_band[0]) << ", " << fmt(result.lambda_slope_band[1])
        << "] -> " << (result.slope_pass ? "PASS" : "FAIL") << "\n";
  log << "  variance band (n >= " << setup.var_min_n << ", rel tol "
      << fmt(setup.var_rel_tol) << ") -> " << (result.variance_pass ? "PASS" : "FAIL")
      << "\n";
  if (!result.band_pass) {
    log << "  failing band: "
        << (result.slope_defined && !result.slope_pass ? "lambda slope"
                                                       : "Zn variance")
        << "\n";
    return 1;
  }
  return 0;
}

int run_identities(const std::string& config_path, const std::string& out_prefix,
                   std::size_t workers, std::ostream& log) {
  const auto t = toml::Table::parse_file(config_path);
  const std::size_t count = static_cast<std::size_t>(t.integer_or("triples.count", 20));
  const std::uint64_t seed = static_cast<std::uint64_t>(t.integer_or("triples.seed", 17));
  const double pop_tol = t.number_or("tolerances.population", 1e-6);
  const double emp_tol = t.number_or("tolerances.empirical_locauc", 5e-3);
  const std::size_t n_emp = static_cast<std::size_t>(t.integer_or("empirical.n", 100000));

  std::vector<experiments::IdentitySuiteResult> partial(count);
  experiments::parallel_for(count, workers, [&](std::size_t i) {
    auto rng = child_stream(SeedSpec{seed}, i);

    // random marginal
    oracle::Marginal marginal = oracle::Marginal::uniform(0.0, 1.0);
    if (rng.bernoulli(0.5))
      marginal = oracle::Marginal::gaussian_mixture(
          rng.uniform(0.3, 0.7), rng.uniform(0.2, 0.45), rng.uniform(0.1, 0.3),
          rng.uniform(0.55, 0.8), rng.uniform(0.1, 0.3), 0.0, 1.0);

    // random eta; keep the rate clear of any flat-eta atoms so the mass
    // constraint premise of the identities holds
    double u0_lo = 0.1, u0_hi = 0.9;
    oracle::Eta eta = oracle::Eta::linear(0.0, 1.0);
    const double pick = rng.uniform01();
    if (pick < 0.34) {
      eta = oracle::Eta::linear(0.0, 1.0);
    } else if (pick < 0.67) {
      const double a = rng.uniform(2.0, 6.0);
      const double x0 = rng.uniform(0.3, 0.7);
      eta = oracle::Eta::logistic(a, -a * x0);
    } else {
      const double q = rng.uniform(0.35, 0.65);
      const double w = rng.uniform(0.2, 0.4);
      eta = oracle::Eta::step_smooth(q, w);
      u0_lo = std::max(u0_lo, 1.0 - marginal.cdf(q + 0.5 * w) + 0.05);
      u0_hi = std::min(u0_hi, marginal.cdf(q - 0.5 * w) - 0.05);
      if (!(u0_hi > u0_lo)) {  // ramp too narrow for a safe rate; fall back
        eta = oracle::Eta::logistic(4.0, -2.0);
        u0_lo = 0.1;
        u0_hi = 0.9;
      }
    }
    oracle::SyntheticModel model(marginal, eta);
    const Rate u0(rng.uniform(u0_lo, u0_hi));

    // random piecewise-linear scorer
    const std::size_t bp_count = 2 + static_cast<std::size_t>(rng.uniform01() * 3.0);
    std::vector<double> bps{0.0};
    for (std::size_t b = 1; b + 1 < bp_count; ++b)
      bps.push_back(rng.uniform(0.1, 0.9));
    bps.push_back(1.0);
    std::sort(bps.begin(), bps.end());
    for (std::size_t b = 1; b < bps.size(); ++b)
      if (bps[b] - bps[b - 1] < 0.02) bps[b] = bps[b - 1] + 0.02;
    std::vector<double> values{0.0};
    for (std::size_t b = 1; b < bps.size(); ++b) {
      const double slope = rng.uniform(0.5, 2.0) * (rng.bernoulli(0.75) ? 1.0 : -1.0);
      values.push_back(values.back() + slope * (bps[b] - bps[b - 1]));
    }
    const auto s = ScoringModel::piecewise_linear(bps, values, 0.5, 2.0);

    partial[i] = experiments::identity_suite(model, {s}, {u0}, n_emp,
                                             SeedSpec{derive_seed(seed, i + 0x10000)},
                                             pop_tol, emp_tol);
  });

  experiments::IdentitySuiteResult merged;
  for (auto& part : partial) {
    merged.all_pass = merged.all_pass && part.all_pass;
    for (auto& c : part.checks) merged.checks.push_back(std::move(c));
  }
  write_file(out_prefix + "_summary.json", merged.to_json());

  // aggregate per identity name
  std::string csv = "name,triple,residual,tolerance,empirical,pass\n";
  std::map<std::string, std::pair<double, std::size_t>> worst;
  for (const auto& c : merged.checks) {
    csv += c.name + ",\"" + c.triple + "\"," + fmt(c.residual) + "," +
           fmt(c.tolerance) + "," + (c.empirical ? "1" : "0") + "," +
           (c.pass ? "1" : "0") + "\n";
    auto& w = worst[c.name];
    w.first = std::max(w.first, c.residual);
    w.second += c.pass ? 0 : 1;
  }
  write_file(out_prefix + "_raw.csv", csv);

  log << "identity suite: " << count << " randomized (model, s, u0) triples\n";
  for (const auto& [name, agg] : worst) {
    char line[192];
    std::snprintf(line, sizeof line, "  %-34s max residual %-12.3g failures %zu\n",
                  name.c_str(), agg.first, agg.second);
    log << line;
  }
  log << (merged.all_pass ? "  all identities PASS\n" : "  FAIL\n");
  return merged.all_pass ? 0 : 1;
}

}  // namespace locrank::config
