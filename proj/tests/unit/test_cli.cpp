#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <vector>

#include "cli/app.hpp"
#include "cli/config.hpp"
#include "cli/results.hpp"
#include "steinlab/errors.hpp"

using namespace steinlab;
using namespace steinlab::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// runs the CLI with a private cache directory
struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args, const fs::path& cache_dir) {
  ::setenv("STEINLAB_CACHE_DIR", cache_dir.c_str(), 1);
  args.insert(args.begin(), "steinlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ResultsSchema, HeaderIsFixed) {
  EXPECT_EQ(kResultsHeader,
            "experiment,q,beta,N,M_trunc,reps,master_seed,estimator,value,stderr,lower,upper");
  EXPECT_EQ(write_csv({}), std::string(kResultsHeader) + "\n");
}

TEST(ResultsSchema, RowRoundTripIsByteIdentical) {
  const std::vector<ResultRow> rows{
      {"clt-rate", 2, 0.9, 8192, 524288, 20000, 42, "sqrt_msq", 1.0 / 3.0, 1e-300, -0.0, 7.5e17},
      {"nclt-rate", 2, 0.7, 64, 0, 0, 18446744073709551615ull, "err_sq", 0.38744099999999997,
       0.0, std::numeric_limits<double>::infinity(), 2.2250738585072014e-308},
  };
  const std::string text = write_csv(rows);
  const auto back = read_csv(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].value, 1.0 / 3.0);
  EXPECT_EQ(back[1].master_seed, 18446744073709551615ull);
  EXPECT_EQ(write_csv(back), text);
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_THROW(parse_row("a,b,c"), DomainError);
  EXPECT_THROW(read_csv("wrong,header\n"), DomainError);
}

TEST(ResultsSchema, FixtureRowParses) {
  // verbatim row from: clt-rate --q 2 --beta 0.9 --n-grid 256,512,...,8192 --reps 20000 --master-seed 42
  const auto r = parse_row(
      "clt-rate,2,0.90000000000000002,8192,524288,20000,42,sqrt_msq,0.272503480663635,"
      "0.0023671625747343052,0.26786384201715574,0.27714311931011426");
  EXPECT_EQ(r.experiment, "clt-rate");
  EXPECT_EQ(r.q, 2);
  EXPECT_EQ(r.beta, 0.9);
  EXPECT_EQ(r.N, 8192u);
  EXPECT_EQ(r.M_trunc, 524288u);
  EXPECT_EQ(r.reps, 20000u);
  EXPECT_EQ(r.master_seed, 42u);
  EXPECT_EQ(r.estimator, "sqrt_msq");
  EXPECT_NEAR(r.lower, r.value - 1.96 * r.stderr_, 1e-15);
  EXPECT_NEAR(r.upper, r.value + 1.96 * r.stderr_, 1e-15);
}

TEST(NGrid, EllipsisAndLists) {
  EXPECT_EQ(parse_n_grid("256,512,...,8192"),
            (std::vector<std::size_t>{256, 512, 1024, 2048, 4096, 8192}));
  EXPECT_EQ(parse_n_grid("1,2,...,10").size(), 10u);
  EXPECT_EQ(parse_n_grid("10, 20, ..., 50"), (std::vector<std::size_t>{10, 20, 30, 40, 50}));
  EXPECT_EQ(parse_n_grid("7"), (std::vector<std::size_t>{7}));
  EXPECT_EQ(parse_n_grid("3,5,9"), (std::vector<std::size_t>{3, 5, 9}));
  EXPECT_THROW(parse_n_grid("1,...,8"), DomainError);
  EXPECT_THROW(parse_n_grid("4,8,...,30"), DomainError);
  EXPECT_THROW(parse_n_grid("8,4,...,2"), DomainError);
  EXPECT_THROW(parse_n_grid("12x"), DomainError);
  EXPECT_EQ(parse_real_list("1e-3, 0.5"), (std::vector<double>{1e-3, 0.5}));
  EXPECT_THROW(parse_real_list("1e-3,abc"), DomainError);
}

TEST(ConfigHash, StableAndSensitiveToResults) {
  ExperimentConfig a;
  a.subcommand = Subcommand::clt_rate;
  a.n_grid = {16, 32, 64, 128};
  const auto h = config_hash(a, "1");
  EXPECT_EQ(h, config_hash(a, "1"));
  EXPECT_NE(h, config_hash(a, "2"));
  ExperimentConfig b = a;
  b.threads = 8;
  b.out_path = "/tmp/x.csv";
  b.use_cache = false;
  EXPECT_EQ(h, config_hash(b, "1"));
  b.master_seed = 1;
  EXPECT_NE(h, config_hash(b, "1"));
  EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Cli, InvalidBetaExitsTwoWithoutFiles) {
  TempDir dir("steinlab_cli_invalid");
  const auto out = dir.path / "sub" / "c.json";
  const auto r = invoke({"constants", "--beta", "0.4", "--out", out.string()}, dir.path / "cache");
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_FALSE(fs::exists(dir.path / "sub"));
  EXPECT_FALSE(fs::exists(dir.path / "cache"));
  EXPECT_EQ(invoke({"rho", "--n-grid", "1,x"}, dir.path / "cache").code, kExitValidation);
  EXPECT_EQ(invoke({"nosuch"}, dir.path / "cache").code, kExitValidation);
  EXPECT_EQ(invoke({"--help"}, dir.path / "cache").code, kExitOk);
}

TEST(Cli, RegimeMismatchExitsThree) {
  TempDir dir("steinlab_cli_regime");
  const auto r = invoke({"clt-rate", "--q", "2", "--beta", "0.7", "--n-grid", "8,16,32,64",
                         "--reps", "10", "--no-cache"},
                        dir.path);
  EXPECT_EQ(r.code, kExitRegime) << r.err;
  EXPECT_EQ(invoke({"constants", "--q", "2", "--beta", "0.75", "--no-cache"}, dir.path).code,
            kExitRegime);
}

TEST(Cli, ConstantsJsonCarriesIdentityCheck) {
  TempDir dir("steinlab_cli_constants");
  const auto r = invoke({"constants", "--q", "2", "--beta", "0.7", "--no-cache"}, dir.path);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["regime"], "nclt");
  EXPECT_TRUE(j["d_h_qfact_is_one"].get<bool>());
  EXPECT_NEAR(j["c_beta"].get<double>(), 5.11209124445735, 1e-12);
  EXPECT_TRUE(j.contains("zeta_2beta"));
  EXPECT_TRUE(j.contains("d_q_beta"));
  EXPECT_TRUE(j.contains("h_q_beta"));
  const auto clt = invoke({"constants", "--q", "3", "--beta", "0.9", "--M", "65536", "--no-cache"},
                          dir.path);
  ASSERT_EQ(clt.code, kExitOk) << clt.err;
  EXPECT_GT(nlohmann::json::parse(clt.out)["sigma_sq"]["value"].get<double>(), 0.0);
}

TEST(Cli, RateRunWritesCsvAndSidecarAtomically) {
  TempDir dir("steinlab_cli_rate");
  const auto out = dir.path / "nclt.csv";
  const auto r = invoke({"nclt-rate", "--q", "2", "--beta", "0.7", "--n-grid", "64,128,...,4096",
                         "--out", out.string(), "--no-cache"},
                        dir.path / "cache");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = read_csv(slurp(out));
  EXPECT_EQ(rows.size(), 7u * 4u);
  EXPECT_EQ(rows[0].estimator, "err_sq");
  EXPECT_NEAR(rows[0].value, 0.387441, 1e-6);
  const auto fit = nlohmann::json::parse(slurp(dir.path / "nclt.fit.json"));
  EXPECT_NEAR(fit["fit"]["theoretical_exponent"].get<double>(), -0.2, 1e-12);
  EXPECT_TRUE(fit["fit"]["passes"].get<bool>());
  for (const auto& e : fs::directory_iterator(dir.path)) {
    EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos) << e.path();
  }
}

TEST(Cli, CacheReplayMatchesFreshCompute) {
  TempDir dir("steinlab_cli_cache");
  const std::vector<std::vector<std::string>> matrix{
      {"rho", "--beta", "0.6", "--n-grid", "0,1,...,20", "--M", "5000"},
      {"nclt-rate", "--beta", "0.7", "--n-grid", "64,128,...,1024"},
      {"clt-rate", "--q", "2", "--beta", "0.9", "--n-grid", "16,32,...,128", "--reps", "50",
       "--master-seed", "3"},
      {"oracle", "--q", "2", "--beta", "0.9", "--n-grid", "4,8", "--M", "4096", "--format", "json"},
  };
  for (const auto& args : matrix) {
    const auto first = invoke(args, dir.path / "cache");
    ASSERT_EQ(first.code, kExitOk) << first.err;
    EXPECT_EQ(first.err.find("cache hit"), std::string::npos);
    const auto second = invoke(args, dir.path / "cache");
    EXPECT_NE(second.err.find("cache hit"), std::string::npos);
    EXPECT_EQ(second.out, first.out);
    auto fresh_args = args;
    fresh_args.push_back("--no-cache");
    const auto fresh = invoke(fresh_args, dir.path / "cache");
    EXPECT_EQ(fresh.out, first.out);
    EXPECT_EQ(fresh.err.find("cache hit"), std::string::npos);
  }
}

TEST(Cli, ThreadCountDoesNotChangeBytes) {
  TempDir dir("steinlab_cli_threads");
  std::vector<std::string> args{"clt-rate", "--q",        "2",  "--beta",     "0.9",
                                "--n-grid", "32,64,...,256", "--reps", "64", "--no-cache"};
  auto one = args, four = args;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = invoke(one, dir.path), b = invoke(four, dir.path);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err.substr(a.err.find("clt-rate:")), b.err.substr(b.err.find("clt-rate:")));
}

TEST(Cli, ConfigFileWithFlagsWinning) {
  TempDir dir("steinlab_cli_config");
  const auto cfg = dir.path / "run.ini";
  {
    std::ofstream os(cfg);
    os << "beta=0.6\nn-grid=1,2,3\nM=100\n";
  }
  const auto from_file = invoke({"rho", "--config", cfg.string(), "--no-cache"}, dir.path);
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  auto rows = read_csv(from_file.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0].beta, 0.6);
  EXPECT_EQ(rows[0].M_trunc, 100u);
  const auto flagged =
      invoke({"rho", "--config", cfg.string(), "--beta", "0.8", "--no-cache"}, dir.path);
  ASSERT_EQ(flagged.code, kExitOk) << flagged.err;
  rows = read_csv(flagged.out);
  EXPECT_EQ(rows[0].beta, 0.8);
  EXPECT_EQ(rows[0].M_trunc, 100u);
}
