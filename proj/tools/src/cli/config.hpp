#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace steinlab::cli {

enum class Subcommand { constants, rho, clt_rate, nclt_rate, ks, spitzer, oracle };
enum class OutputFormat { automatic, csv, json };

const char* subcommand_name(Subcommand s);
Subcommand parse_subcommand(std::string_view name);

/// Everything one experiment run depends on.  `threads`, `out_path` and
/// `use_cache` change where and how fast results appear, never what they are.
struct ExperimentConfig {
  Subcommand subcommand = Subcommand::constants;
  int q = 2;
  double beta = 0.75;
  bool normalize_weights = true;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 1000;
  std::uint64_t master_seed = 0;
  std::size_t trunc_factor = 64;
  /// Weight truncation; 0 picks trunc_factor * max(n_grid), or 2^20 when
  /// there is no grid.
  std::size_t trunc_M = 0;
  /// Horizon of the Hermite-limit surrogate (ks, spitzer in the NCLT regime).
  std::size_t n_ref = 4096;
  /// Terms summed exactly by the spitzer series.
  std::uint64_t n_max = std::uint64_t{1} << 20;
  std::vector<double> eps;
  double sigma_tol = 1e-10;
  OutputFormat format = OutputFormat::automatic;

  std::filesystem::path out_path;
  unsigned threads = 1;
  bool use_cache = true;

  /// csv or json after resolving `automatic` (json only for constants).
  OutputFormat resolved_format() const;
  /// Effective M for experiments that simulate or tabulate rho.
  std::size_t effective_M() const;
};

/// "256,512,...,8192" style lists.  An ellipsis between the second and the
/// last entry continues geometrically when the first two entries have an
/// integer ratio that reaches the last one exactly, arithmetically otherwise.
std::vector<std::size_t> parse_n_grid(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

/// Checks the model and run parameters against what the chosen experiment
/// needs; throws DomainError.  Regime mismatches surface later as RegimeError.
void validate(const ExperimentConfig& cfg);

/// Canonical key=value serialization of the result-defining fields.
std::string canonical(const ExperimentConfig& cfg);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Cache key: hash of canonical(cfg) plus the build version.
std::uint64_t config_hash(const ExperimentConfig& cfg, std::string_view version);

}  // namespace steinlab::cli
