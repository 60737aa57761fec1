#include "cli/app.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "cli/cache.hpp"
#include "cli/experiments.hpp"
#include "steinlab/errors.hpp"

#ifndef STEINLAB_VERSION
#define STEINLAB_VERSION "dev"
#endif

namespace steinlab::cli {

std::string_view build_version() { return STEINLAB_VERSION; }

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_extension(".fit.json");
  return p;
}

namespace {

Artifacts compute(const ExperimentConfig& cfg, std::ostream& err) {
  const std::string key = canonical(cfg);
  const std::uint64_t hash = config_hash(cfg, build_version());
  std::optional<ResultCache> cache;
  if (cfg.use_cache) cache.emplace(default_cache_dir());
  if (cache) {
    if (auto hit = cache->load(hash, key)) {
      err << "cache hit " << cache->entry_path(hash).string() << '\n';
      return *hit;
    }
  }
  Artifacts a = render(cfg, run_experiment(cfg));
  if (cache) {
    try {
      cache->store(hash, key, a);
    } catch (const std::exception& e) {
      err << "warning: cache not written: " << e.what() << '\n';
    }
  }
  return a;
}

}  // namespace

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const Artifacts a = compute(cfg, err);
    if (cfg.out_path.empty()) {
      out << a.main;
      if (a.sidecar) err << *a.sidecar;
    } else {
      write_file_atomic(cfg.out_path, a.main);
      if (a.sidecar) write_file_atomic(sidecar_path(cfg.out_path), *a.sidecar);
    }
    if (!a.summary.empty()) err << subcommand_name(cfg.subcommand) << ": " << a.summary << '\n';
    return kExitOk;
  } catch (const DomainError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const RangeError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << '\n';
    return kExitRegime;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments for long-memory moving averages and their Hermite sums",
               "steinlab"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.set_version_flag("--version", std::string(build_version()));
  app.require_subcommand(1);

  ExperimentConfig cfg;
  bool raw_weights = false, no_cache = false;
  // lists arrive as one comma-joined token from the command line and as
  // separate items from a config file
  std::vector<std::string> grid, eps;
  std::string format = "auto", out_path;
  app.add_option("--q", cfg.q, "Hermite rank q >= 1");
  app.add_option("--beta", cfg.beta, "memory exponent in (1/2, 1)");
  app.add_flag("--raw-weights", raw_weights, "use i^-beta weights without normalization");
  app.add_option("--n-grid", grid, "horizons (or lags for rho), e.g. 256,512,...,8192");
  app.add_option("--reps", cfg.reps, "Monte Carlo replicates");
  app.add_option("--master-seed", cfg.master_seed, "seed of the Philox streams");
  app.add_option("--trunc-factor", cfg.trunc_factor, "weight truncation M = factor * max N");
  app.add_option("--M", cfg.trunc_M, "explicit weight truncation (overrides --trunc-factor)");
  app.add_option("--n-ref", cfg.n_ref, "surrogate horizon for the Hermite limit law");
  app.add_option("--n-max", cfg.n_max, "terms summed exactly by the spitzer series");
  app.add_option("--eps", eps, "comma-separated epsilons for spitzer");
  app.add_option("--sigma-tol", cfg.sigma_tol, "tolerance on the sigma^2 series remainder");
  app.add_option("--format", format, "auto, csv or json")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
  app.add_flag("--no-cache", no_cache, "ignore and do not fill the result cache");
  app.fallthrough();

  std::string chosen;
  for (const char* name : {"constants", "rho", "clt-rate", "nclt-rate", "ks", "spitzer", "oracle"}) {
    app.add_subcommand(name)->fallthrough()->callback([&chosen, name] { chosen = name; });
  }
  app.get_subcommand("constants")->description("model constants and the regime");
  app.get_subcommand("rho")->description("truncated covariance table at the lags in --n-grid");
  app.get_subcommand("clt-rate")->description("Monte Carlo Stein bound sweep and rate fit");
  app.get_subcommand("nclt-rate")->description("deterministic kernel-error sweep and rate fit");
  app.get_subcommand("ks")->description("Kolmogorov-Smirnov distance of the normalized sums");
  app.get_subcommand("spitzer")->description("Spitzer-type series at the --eps values");
  app.get_subcommand("oracle")->description("exact small-N oracles (Stein traces, kernel quadrature)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    cfg.subcommand = parse_subcommand(chosen);
    cfg.normalize_weights = !raw_weights;
    cfg.use_cache = !no_cache;
    cfg.out_path = out_path;
    const auto join = [](const std::vector<std::string>& parts) {
      std::string s;
      for (const auto& p : parts) s += (s.empty() ? "" : ",") + p;
      return s;
    };
    if (!grid.empty()) cfg.n_grid = parse_n_grid(join(grid));
    if (!eps.empty()) cfg.eps = parse_real_list(join(eps));
    cfg.format = format == "csv" ? OutputFormat::csv
                 : format == "json" ? OutputFormat::json
                                    : OutputFormat::automatic;
  } catch (const Error& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  }
  return run(cfg, out, err);
}

}  // namespace steinlab::cli
