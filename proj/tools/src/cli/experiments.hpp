#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/results.hpp"

namespace steinlab::cli {

/// Rendered outputs of one run: the main file body (CSV or JSON), the
/// rate-fit sidecar for the rate experiments, and a one-line summary.
struct Artifacts {
  std::string main;
  std::optional<std::string> sidecar;
  std::string summary;
};

/// Rows plus the experiment-specific JSON that goes with them.
struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::string summary;
  std::optional<std::string> fit_json;   // rate experiments only
  std::optional<std::string> main_json;  // constants: the JSON document itself
};

/// Runs the experiment named by cfg.subcommand.  Library errors propagate.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

Artifacts render(const ExperimentConfig& cfg, const ExperimentResult& result);

}  // namespace steinlab::cli
