#include "cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "steinlab/constants.hpp"
#include "steinlab/covariance.hpp"
#include "steinlab/empirics.hpp"
#include "steinlab/errors.hpp"
#include "steinlab/nclt.hpp"
#include "steinlab/parallel.hpp"
#include "steinlab/paths.hpp"
#include "steinlab/special.hpp"
#include "steinlab/spitzer.hpp"
#include "steinlab/stein.hpp"

namespace steinlab::cli {

namespace {

using json = nlohmann::ordered_json;

// lower/upper: +-1.96 standard errors for Monte Carlo values, +-bound for
// deterministic ones
constexpr double kMcBand = 1.96;

ModelParams model(const ExperimentConfig& cfg) {
  return {cfg.q, cfg.beta, cfg.normalize_weights};
}

struct RowMaker {
  const ExperimentConfig& cfg;
  std::vector<ResultRow>& rows;

  void add(std::size_t N, std::size_t M, std::size_t reps, const std::string& estimator, double value,
           double err, double band) {
    ResultRow r;
    r.experiment = subcommand_name(cfg.subcommand);
    r.q = cfg.q;
    r.beta = cfg.beta;
    r.N = N;
    r.M_trunc = M;
    r.reps = reps;
    r.master_seed = cfg.master_seed;
    r.estimator = estimator;
    r.value = value;
    r.stderr_ = err;
    r.lower = value - band * err;
    r.upper = value + band * err;
    rows.push_back(std::move(r));
  }
  void exact(std::size_t N, std::size_t M, const std::string& estimator, double value,
             double bound = 0.0) {
    add(N, M, 0, estimator, value, bound, 1.0);
  }
  void mc(std::size_t N, std::size_t M, std::size_t reps, const std::string& estimator,
          const Estimate& e) {
    add(N, M, reps, estimator, e.value, e.error, kMcBand);
  }
};

json fit_to_json(const RateFit& f) {
  json j;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["slope_stderr"] = f.slope_stderr;
  j["n_points"] = f.n_points;
  j["theoretical_exponent"] = f.theoretical_exponent;
  j["pass_band"] = f.pass_band;
  j["passes"] = f.passes();
  return j;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Estimate sample_mean(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n), ErrorKind::standard_error};
}

ExperimentResult run_constants(const ExperimentConfig& cfg) {
  const ModelParams p = model(cfg);
  const RegimeInfo info = classify_regime(p);
  std::optional<CovarianceTable> cov;
  const std::size_t M = cfg.effective_M();
  if (info.regime == Regime::clt) cov = CovarianceTable::build(p, M, M - 1);
  const ConstantSet cs = compute_constants(p, cov ? &*cov : nullptr, cfg.sigma_tol);

  ExperimentResult out;
  RowMaker rows{cfg, out.rows};
  json j;
  j["experiment"] = "constants";
  j["q"] = cfg.q;
  j["beta"] = cfg.beta;
  j["normalize_weights"] = cfg.normalize_weights;
  j["regime"] = info.regime == Regime::clt ? "clt" : "nclt";
  j["regime_index"] = p.regime_index();
  j["c_beta"] = cs.c_beta;
  j["zeta_2beta"] = {{"value", cs.zeta_2beta.value}, {"error_bound", cs.zeta_2beta.error}};
  j["cov_constant"] = cs.cov_constant;
  j["spitzer_limit"] = spitzer_limit(p);
  rows.exact(0, 0, "c_beta", cs.c_beta);
  rows.exact(0, 0, "zeta_2beta", cs.zeta_2beta.value, cs.zeta_2beta.error);
  rows.exact(0, 0, "cov_constant", cs.cov_constant);
  rows.exact(0, 0, "spitzer_limit", spitzer_limit(p));
  if (info.regime == Regime::clt) {
    j["clt_exponent"] = *info.clt_exponent;
    j["clt_branch"] = *info.clt_branch == CltBranch::low_beta ? "low_beta" : "high_beta";
    j["sigma_sq"] = {{"value", cs.sigma_sq->value},
                     {"error_bound", cs.sigma_sq->error},
                     {"M_trunc", M}};
    rows.exact(0, 0, "clt_exponent", *info.clt_exponent);
    rows.exact(0, M, "sigma_sq", cs.sigma_sq->value, cs.sigma_sq->error);
    out.summary = "clt regime, sigma^2 = " + num(cs.sigma_sq->value);
  } else {
    const double d = *cs.d_q_beta, h = *cs.h_q_beta;
    const double dhq = d * h * factorial(cfg.q);
    j["nclt_exponent"] = *info.nclt_exponent;
    j["d_q_beta"] = d;
    j["h_q_beta"] = h;
    j["d_h_qfact"] = dhq;
    j["d_h_qfact_is_one"] = std::abs(dhq - 1.0) <= 1e-12;
    rows.exact(0, 0, "nclt_exponent", *info.nclt_exponent);
    rows.exact(0, 0, "d_q_beta", d);
    rows.exact(0, 0, "h_q_beta", h);
    rows.exact(0, 0, "d_h_qfact", dhq);
    out.summary = "nclt regime, d*h*q! = " + num(dhq);
  }
  out.main_json = j.dump(2) + "\n";
  return out;
}

ExperimentResult run_rho(const ExperimentConfig& cfg) {
  const ModelParams p = model(cfg);
  const std::size_t M = cfg.effective_M();
  const std::size_t max_lag = cfg.n_grid.back();
  const auto cov = CovarianceTable::build(p, M, max_lag);
  ExperimentResult out;
  RowMaker rows{cfg, out.rows};
  for (std::size_t m : cfg.n_grid) {
    rows.exact(m, M, "rho", rho(cov, m), cov.ideal_bias_bound(m));
    if (m >= 1) rows.exact(m, M, "rho_asymptotic_ratio", rho_asymptotic_ratio(cov, m));
  }
  out.summary = "rho at " + std::to_string(cfg.n_grid.size()) + " lags, M = " + std::to_string(M);
  return out;
}

ExperimentResult run_clt_rate(const ExperimentConfig& cfg) {
  const ModelParams p = model(cfg);
  const std::size_t M = cfg.effective_M();
  const auto cov = CovarianceTable::build(p, M, M - 1);
  const Estimate sigma = sigma_qbeta(p, cov, cfg.sigma_tol);
  SteinOptions opts;
  opts.threads = cfg.threads;
  const auto report =
      berry_esseen_report(p, cov, sigma.value, cfg.n_grid, cfg.reps, cfg.master_seed, opts);
  ExperimentResult out;
  RowMaker rows{cfg, out.rows};
  for (const auto& e : report.points) {
    const double root = std::sqrt(e.msq.value);
    rows.mc(e.N, M, e.reps, "sqrt_msq", {root, e.msq.error / (2.0 * root), ErrorKind::standard_error});
    rows.mc(e.N, M, e.reps, "msq", e.msq);
    rows.mc(e.N, M, e.reps, "mean_T", e.mean_T);
    rows.exact(e.N, M, "mean_T_exact", mean_T_exact(p, cov, sigma.value, e.N));
  }
  json j;
  j["experiment"] = "clt-rate";
  j["quantity"] = "sqrt_msq";
  j["sigma_sq"] = sigma.value;
  j["M_trunc"] = M;
  j["fit"] = fit_to_json(report.fit);
  out.fit_json = j.dump(2) + "\n";
  out.summary = "slope " + num(report.fit.slope) + " (theory " +
                num(report.fit.theoretical_exponent) + ")";
  return out;
}

ExperimentResult run_nclt_rate(const ExperimentConfig& cfg) {
  const ModelParams p = model(cfg);
  const InnerSeriesTable table(p.beta, cfg.n_grid.back());
  ExperimentResult out;
  RowMaker rows{cfg, out.rows};
  std::vector<std::pair<double, double>> pts;
  double exponent = 0.0;
  for (std::size_t N : cfg.n_grid) {
    const auto k = kernel_error(p, table, N);
    exponent = k.theoretical_exponent;
    rows.exact(N, 0, "err_sq", k.err_sq);
    rows.exact(N, 0, "g_norm_sq", k.g_norm_sq);
    rows.exact(N, 0, "g_inner", k.inner);
    rows.exact(N, 0, "renorm_second_moment", renorm_second_moment(p, table, N));
    pts.emplace_back(static_cast<double>(N), k.err_sq);
  }
  const RateFit fit = fit_rate(pts, exponent);
  json j;
  j["experiment"] = "nclt-rate";
  j["quantity"] = "err_sq";
  j["inner_series_max_error"] = table.max_error();
  j["fit"] = fit_to_json(fit);
  out.fit_json = j.dump(2) + "\n";
  out.summary = "slope " + num(fit.slope) + " (theory " + num(exponent) + ")";
  return out;
}

std::vector<double> clt_z_sample(const ModelParams& p, const CovarianceTable& cov, double sigma_sq,
                                 std::size_t N, std::size_t reps, std::uint64_t seed,
                                 unsigned threads) {
  const PathSimulator sim(cov.weights(), N);
  const double variance = cov.rho()[0];
  std::vector<double> z(reps);
  const unsigned workers = resolve_threads(threads);
  std::vector<PathSimulator::Workspace> ws(workers);
  std::vector<std::vector<double>> X(workers, std::vector<double>(N));
  for_each_replicate(reps, workers, [&](std::size_t r, unsigned w) {
    sim.simulate(seed, r, X[w], ws[w]);
    z[r] = z_clt(p, sigma_sq, N, s_n(p.q, X[w], variance));
  });
  return z;
}

ExperimentResult run_ks(const ExperimentConfig& cfg) {
  const ModelParams p = model(cfg);
  const RegimeInfo info = classify_regime(p);
  ExperimentResult out;
  RowMaker rows{cfg, out.rows};
  const double n = static_cast<double>(cfg.reps);
  std::string last;
  if (info.regime == Regime::clt) {
    for (std::size_t N : cfg.n_grid) {
      const std::size_t M = cfg.trunc_M > 0 ? cfg.trunc_M : cfg.trunc_factor * N;
      const auto cov = CovarianceTable::build(p, M, M - 1);
      const double sigma_sq = sigma_qbeta(p, cov, cfg.sigma_tol).value;
      const auto z = clt_z_sample(p, cov, sigma_sq, N, cfg.reps, cfg.master_seed, cfg.threads);
      const double D = ks_one_sample(z, [](double x) { return special::normal_cdf(x); });
      std::vector<double> z2(z.size());
      std::transform(z.begin(), z.end(), z2.begin(), [](double x) { return x * x; });
      rows.exact(N, M, "ks_normal", D);
      rows.exact(N, M, "ks_normal_pvalue", kolmogorov_sf(std::sqrt(n) * D));
      rows.mc(N, M, cfg.reps, "z_second_moment", sample_mean(z2));
      last = "KS vs normal at N = " + std::to_string(N) + ": " + num(D);
    }
  } else {
    // distance to the law at the reference horizon, drawn from another seed
    SurrogateOptions opts;
    opts.threads = cfg.threads;
    opts.trunc_factor = cfg.trunc_factor;
    const auto ref = hermite_surrogate_sample(p, cfg.n_ref, cfg.reps, ~cfg.master_seed, opts);
    for (std::size_t N : cfg.n_grid) {
      const auto z = hermite_surrogate_sample(p, N, cfg.reps, cfg.master_seed, opts);
      const double D = ks_two_sample(z, ref);
      std::vector<double> z2(z.size());
      std::transform(z.begin(), z.end(), z2.begin(), [](double x) { return x * x; });
      const std::size_t M = cfg.trunc_factor * N;
      rows.exact(N, M, "ks_vs_reference", D);
      rows.exact(N, M, "ks_vs_reference_pvalue", kolmogorov_sf(std::sqrt(n / 2.0) * D));
      rows.mc(N, M, cfg.reps, "z_second_moment", sample_mean(z2));
      last = "two-sample KS vs N_ref = " + std::to_string(cfg.n_ref) + " at N = " +
             std::to_string(N) + ": " + num(D);
    }
  }
  out.summary = last;
  return out;
}

ExperimentResult run_spitzer(const ExperimentConfig& cfg) {
  const ModelParams p = model(cfg);
  const RegimeInfo info = classify_regime(p);
  ExperimentResult out;
  RowMaker rows{cfg, out.rows};
  auto series_row = [&](const std::string& name, const SeriesValue& v, std::size_t M,
                        std::size_t reps) {
    rows.add(v.n_terms, M, reps, name, v.value(), v.tail_remainder_bound, 1.0);
  };
  if (info.regime == Regime::clt) {
    const std::size_t M = cfg.effective_M();
    const auto cov = CovarianceTable::build(p, M, M - 1);
    const double sigma = std::sqrt(sigma_qbeta(p, cov, cfg.sigma_tol).value);
    for (double eps : cfg.eps) {
      const auto f = f1_hat(p, sigma, eps, cfg.n_max);
      const auto g = g1_hat(p, sigma, eps, cfg.n_max);
      series_row("f1_hat", f, M, 0);
      rows.exact(f.n_terms, M, "f1_log_ratio", -f.value() / std::log(eps),
                 f.tail_remainder_bound / std::abs(std::log(eps)));
      series_row("g1_hat", g, M, 0);
      const double s = (eps / sigma) * (eps / sigma);
      rows.exact(g.n_terms, M, "g1_scaled", s * g.value(), s * g.tail_remainder_bound);
    }
  } else {
    SurrogateOptions opts;
    opts.threads = cfg.threads;
    opts.trunc_factor = cfg.trunc_factor;
    const auto z = hermite_surrogate_sample(p, cfg.n_ref, cfg.reps, cfg.master_seed, opts);
    const std::size_t M = cfg.trunc_factor * cfg.n_ref;
    const double a = nclt_growth_exponent(p);
    ModelParams lit = p;
    lit.normalize_weights = false;
    const double h = h_qbeta(lit, c_beta(p.beta));
    std::vector<double> moment(z.size());
    std::transform(z.begin(), z.end(), moment.begin(),
                   [a](double x) { return std::pow(std::abs(x), 1.0 / a); });
    rows.mc(cfg.n_ref, M, cfg.reps, "abs_moment_1_over_a", sample_mean(moment));
    for (double eps : cfg.eps) {
      const auto f = f2_hat(p, z, eps, cfg.n_max);
      const auto g = g2_hat(p, z, eps, cfg.n_max);
      series_row("f2_hat", f, M, cfg.reps);
      rows.exact(f.n_terms, M, "f2_log_ratio", -f.value() / std::log(eps));
      series_row("g2_hat", g, M, cfg.reps);
      rows.exact(g.n_terms, M, "g2_scaled", std::pow(eps / h, 1.0 / a) * g.value());
    }
  }
  rows.exact(0, 0, "spitzer_limit", spitzer_limit(p));
  out.summary = "series at " + std::to_string(cfg.eps.size()) + " eps values";
  return out;
}

ExperimentResult run_oracle(const ExperimentConfig& cfg) {
  const ModelParams p = model(cfg);
  const RegimeInfo info = classify_regime(p);
  ExperimentResult out;
  RowMaker rows{cfg, out.rows};
  if (info.regime == Regime::clt) {
    if (cfg.q != 2) throw DomainError("the exact Stein oracle covers q = 2 only");
    const std::size_t M = cfg.effective_M();
    const auto cov = CovarianceTable::build(p, M, M - 1);
    const double sigma_sq = sigma_qbeta(p, cov, cfg.sigma_tol).value;
    for (std::size_t N : cfg.n_grid) {
      const auto tr = stein_exact_q2(cov, sigma_sq, N);
      rows.exact(N, M, "trace_mean_T", tr.mean);
      rows.exact(N, M, "trace_var_T", tr.variance);
      rows.exact(N, M, "trace_msq", tr.msq());
      rows.exact(N, M, "mean_T_exact", mean_T_exact(p, cov, sigma_sq, N));
      if (N <= 128) rows.exact(N, M, "wick_msq", stein_wick_q2(cov, sigma_sq, N).msq());
    }
    out.summary = "exact Stein moments at " + std::to_string(cfg.n_grid.size()) + " horizons";
  } else {
    for (std::size_t N : cfg.n_grid) {
      rows.exact(N, 0, "g_inner_quad", g_inner_quad(p, N));
      rows.exact(N, 0, "g_inner", g_inner(p, N));
    }
    out.summary = "kernel inner products at " + std::to_string(cfg.n_grid.size()) + " horizons";
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  switch (cfg.subcommand) {
    case Subcommand::constants: return run_constants(cfg);
    case Subcommand::rho: return run_rho(cfg);
    case Subcommand::clt_rate: return run_clt_rate(cfg);
    case Subcommand::nclt_rate: return run_nclt_rate(cfg);
    case Subcommand::ks: return run_ks(cfg);
    case Subcommand::spitzer: return run_spitzer(cfg);
    case Subcommand::oracle: return run_oracle(cfg);
  }
  throw DomainError("unknown subcommand");
}

Artifacts render(const ExperimentConfig& cfg, const ExperimentResult& result) {
  Artifacts a;
  a.summary = result.summary;
  a.sidecar = result.fit_json;
  if (cfg.resolved_format() == OutputFormat::csv) {
    a.main = write_csv(result.rows);
    return a;
  }
  if (result.main_json) {
    a.main = *result.main_json;
    return a;
  }
  json j;
  j["experiment"] = subcommand_name(cfg.subcommand);
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"experiment", r.experiment}, {"q", r.q}, {"beta", r.beta}, {"N", r.N},
                    {"M_trunc", r.M_trunc}, {"reps", r.reps}, {"master_seed", r.master_seed},
                    {"estimator", r.estimator}, {"value", r.value}, {"stderr", r.stderr_},
                    {"lower", r.lower}, {"upper", r.upper}});
  }
  j["rows"] = std::move(rows);
  if (result.fit_json) j["fit"] = json::parse(*result.fit_json)["fit"];
  a.main = j.dump(2) + "\n";
  return a;
}

}  // namespace steinlab::cli
