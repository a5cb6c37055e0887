// locrank: dataset generation, criterion evaluation, ERM fitting and the
// Monte Carlo studies, from the command line. Outputs are plain CSV/JSON;
// exit codes: 0 ok, 1 acceptance-band failure, 2 input error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "locrank/locrank.hpp"

namespace {

using namespace locrank;

constexpr int kExitOk = 0;
constexpr int kExitBandFailure = 1;
constexpr int kExitInputError = 2;

Rate parse_rate(const std::string& text) {
  if (text == "global") return Rate::global();
  return Rate(std::stod(text));
}

std::vector<double> column_scores(const Dataset& data, const std::string& column) {
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (column == "x" + std::to_string(j + 1)) {
      std::vector<double> out(data.rows());
      for (std::size_t i = 0; i < data.rows(); ++i) out[i] = data.feature(i, j);
      return out;
    }
  }
  throw std::invalid_argument("no feature column named '" + column + "'");
}

ScoringModel model_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scoring spec " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ScoringModel::from_json(ss.str());
}

std::vector<double> resolve_scores(const Dataset& data,
                                   const std::string& score_column,
                                   const std::string& model_path) {
  if (!score_column.empty() && !model_path.empty())
    throw std::invalid_argument("pass either --score-column or --model, not both");
  if (!score_column.empty()) return column_scores(data, score_column);
  if (!model_path.empty())
    return score_dataset(model_from_json_file(model_path), data);
  throw std::invalid_argument("a scoring spec is required: --score-column or --model");
}

bool has_ties(std::vector<double> scores) {
  std::sort(scores.begin(), scores.end());
  return std::adjacent_find(scores.begin(), scores.end()) != scores.end();
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << content;
}

int cmd_simulate(const std::string& model_path, std::size_t n,
                 std::uint64_t seed, const std::string& out_path) {
  if (n == 0) throw std::invalid_argument("--n must be at least 1");
  const auto model = config::model_from_file(model_path);
  auto rng = child_stream(SeedSpec{seed}, 0);
  const auto data = model.sample(n, rng);
  data.write_csv(out_path);
  std::printf("n=%zu n+=%zu n-=%zu p_hat=%.17g\n", data.rows(), data.positives(),
              data.negatives(),
              static_cast<double>(data.positives()) / static_cast<double>(data.rows()));
  return kExitOk;
}

int cmd_eval(const std::string& data_path, const std::string& score_column,
             const std::string& model_path, const std::string& u0_text,
             bool skip_rank_stats, const std::string& out_path) {
  const auto data = Dataset::read_csv(data_path);
  const auto scores = resolve_scores(data, score_column, model_path);
  const Rate u0 = parse_rate(u0_text);
  if (!skip_rank_stats && has_ties(scores))
    throw std::invalid_argument(
        "tied scores: rank statistics (t_wilcoxon, t_local, w_hat) are "
        "undefined under the strict-rank policy; pass --skip-rank-stats to "
        "omit them");
  const auto report = full_report(scores, data.labels(), u0);
  write_or_print(out_path, report.to_json() + "\n");
  return kExitOk;
}

int cmd_roc(const std::string& data_path, const std::string& score_column,
            const std::string& model_path, std::size_t grid,
            const std::string& out_path) {
  if (grid == 0) throw std::invalid_argument("--grid must be at least 1");
  const auto data = Dataset::read_csv(data_path);
  const auto scores = resolve_scores(data, score_column, model_path);
  std::vector<double> u_grid(grid);
  for (std::size_t i = 0; i < grid; ++i)
    u_grid[i] = static_cast<double>(i + 1) / static_cast<double>(grid + 1);
  const auto points = roc_points(scores, data.labels(), u_grid);
  const double p_hat =
      static_cast<double>(data.positives()) / static_cast<double>(data.rows());
  write_or_print(out_path, roc_csv(points, p_hat));
  return kExitOk;
}

int cmd_erm(const std::string& data_path, const std::string& config_path,
            const std::string& out_path) {
  const auto data = Dataset::read_csv(data_path);
  const auto table = toml::Table::parse_file(config_path);
  const auto problem = config::erm_problem_from_toml(table, "problem");
  const auto result = erm::run(problem, data);
  write_or_print(out_path, result.to_json() + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local bipartite ranking: simulation, criteria, ERM and "
               "Monte Carlo studies"};
  app.require_subcommand(1);

  // simulate
  std::string sim_model, sim_out;
  std::size_t sim_n = 0;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "sample a dataset from a model config");
  simulate->add_option("--model", sim_model, "model config (.toml or .json)")->required();
  simulate->add_option("--n", sim_n, "sample size")->required();
  simulate->add_option("--seed", sim_seed, "master seed");
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  // eval
  std::string eval_data, eval_column, eval_model, eval_u0 = "0.2", eval_out;
  bool eval_skip_ranks = false;
  auto* eval = app.add_subcommand("eval", "full criterion report as JSON");
  eval->add_option("--data", eval_data, "dataset CSV")->required();
  eval->add_option("--score-column", eval_column, "feature column holding scores");
  eval->add_option("--model", eval_model, "scoring model JSON");
  eval->add_option("--u0", eval_u0, "rate of best instances in (0,1), or 'global'");
  eval->add_flag("--skip-rank-stats", eval_skip_ranks,
                 "omit rank statistics when scores are tied");
  eval->add_option("--out", eval_out, "output path (default stdout)");

  // roc
  std::string roc_data, roc_column, roc_model, roc_out;
  std::size_t roc_grid = 99;
  auto* roc = app.add_subcommand("roc", "ROC curve points over a top-rate grid");
  roc->add_option("--data", roc_data, "dataset CSV")->required();
  roc->add_option("--score-column", roc_column, "feature column holding scores");
  roc->add_option("--model", roc_model, "scoring model JSON");
  roc->add_option("--grid", roc_grid, "number of evenly spaced u values");
  roc->add_option("--out", roc_out, "output path (default stdout)");

  // erm
  std::string erm_data, erm_config, erm_out;
  auto* erm_cmd = app.add_subcommand("erm", "fit by empirical risk minimization");
  erm_cmd->add_option("--data", erm_data, "dataset CSV")->required();
  erm_cmd->add_option("--config", erm_config, "problem config TOML")->required();
  erm_cmd->add_option("--out", erm_out, "output path (default stdout)");

  // studies
  std::string study_config, study_out = "study";
  std::size_t workers = 0;
  for (const char* name : {"rates", "decomp", "identities"}) {
    auto* cmd = app.add_subcommand(
        name, std::string("run the ") + name + " study from a TOML config");
    cmd->add_option("--config", study_config, "study config TOML")->required();
    cmd->add_option("--out", study_out, "output file prefix");
    cmd->add_option("--workers", workers,
                    "replication parallelism (results do not depend on it)");
  }

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(sim_model, sim_n, sim_seed, sim_out);
    if (eval->parsed())
      return cmd_eval(eval_data, eval_column, eval_model, eval_u0,
                      eval_skip_ranks, eval_out);
    if (roc->parsed())
      return cmd_roc(roc_data, roc_column, roc_model, roc_grid, roc_out);
    if (erm_cmd->parsed()) return cmd_erm(erm_data, erm_config, erm_out);
    if (app.get_subcommand("rates")->parsed())
      return locrank::config::run_rates(study_config, study_out, workers, std::cout);
    if (app.get_subcommand("decomp")->parsed())
      return locrank::config::run_decomp(study_config, study_out, workers, std::cout);
    if (app.get_subcommand("identities")->parsed())
      return locrank::config::run_identities(study_config, study_out, workers,
                                             std::cout);
    return kExitInputError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
