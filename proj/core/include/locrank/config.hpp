#pragma once

#include <iosfwd>
#include <string>

#include "locrank/erm.hpp"
#include "locrank/experiments.hpp"
#include "locrank/oracle.hpp"
#include "locrank/toml.hpp"

namespace locrank::config {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model spec from TOML or JSON (picked by file extension). Marginal kind,
/// eta preset; p is always computed, never supplied.
oracle::SyntheticModel model_from_file(const std::string& path);
oracle::SyntheticModel model_from_toml(const toml::Table& t, const std::string& prefix);

/// Scoring spec from a TOML section (kind = piecewise-linear | linear).
ScoringModel score_from_toml(const toml::Table& t, const std::string& prefix);

erm::ErmProblem erm_problem_from_toml(const toml::Table& t, const std::string& prefix = "problem");

/// Study runners behind the CLI: parse the config, run, write
/// <out_prefix>_summary.json and <out_prefix>_raw.csv, print a summary
/// table. Exit code 0 when every acceptance band passes, 1 otherwise.
int run_rates(const std::string& config_path, const std::string& out_prefix,
              std::size_t workers, std::ostream& log);
int run_decomp(const std::string& config_path, const std::string& out_prefix,
               std::size_t workers, std::ostream& log);
int run_identities(const std::string& config_path, const std::string& out_prefix,
                   std::size_t workers, std::ostream& log);

}  // namespace locrank::config
