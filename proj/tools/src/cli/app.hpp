#pragma once

#include <iosfwd>
#include <string_view>

#include "cli/config.hpp"

namespace steinlab::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitNumeric = 4;

std::string_view build_version();

/// Main file next to `out`: results.csv -> results.fit.json.
std::filesystem::path sidecar_path(const std::filesystem::path& out);

/// Validates, replays from or fills the cache, and writes the artifacts
/// (to cfg.out_path atomically, else the main body to `out`).  Errors are
/// reported on `err` and mapped to the exit codes above.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Flag parsing in front of run().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace steinlab::cli
