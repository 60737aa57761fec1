#include "steinlab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steinlab/covariance.hpp"
#include "steinlab/errors.hpp"
#include "steinlab/hermite.hpp"
#include "steinlab/parallel.hpp"
#include "steinlab/summation.hpp"

namespace steinlab {

namespace {

constexpr std::size_t kDirectToeplitzMax = 128;
constexpr std::size_t kDenseMax = 2048;
constexpr std::size_t kWickMax = 128;

void require_clt(const ModelParams& params, const char* what) {
  if (classify_regime(params).regime != Regime::clt) {
    throw RegimeError(std::string(what) + " needs the CLT regime");
  }
}

void require_lags(const CovarianceTable& cov, std::size_t N) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (N - 1 > cov.m_max()) {
    throw RangeError("covariance table holds lags up to " + std::to_string(cov.m_max()) +
                     ", N = " + std::to_string(N) + " needs " + std::to_string(N - 1));
  }
}

Estimate sample_mean(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = compensated_sum(xs) / n;
  CompensatedSum ss;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss.value() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n), ErrorKind::standard_error};
}

SteinEstimate summarize(std::size_t N, std::span<const double> T, DistanceKind kind) {
  std::vector<double> dev(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) dev[i] = (1.0 - T[i]) * (1.0 - T[i]);
  SteinEstimate e;
  e.N = N;
  e.reps = T.size();
  e.mean_T = sample_mean(T);
  e.msq = sample_mean(dev);
  e.distance_kind = kind;
  e.bound = e.bound_for(kind);
  return e;
}

std::vector<double> dense_toeplitz(std::span<const double> rho, std::size_t N) {
  std::vector<double> R(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) R[i * N + j] = rho[i > j ? i - j : j - i];
  }
  return R;
}

}  // namespace

double distance_constant(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kolmogorov: return 1.0;
    case DistanceKind::wasserstein: return 1.0;
    case DistanceKind::total_variation: return 2.0;
    case DistanceKind::fortet_mourier: return 4.0;
  }
  throw DomainError("unknown distance kind");
}

const char* distance_name(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kolmogorov: return "kolmogorov";
    case DistanceKind::wasserstein: return "wasserstein";
    case DistanceKind::total_variation: return "total_variation";
    case DistanceKind::fortet_mourier: return "fortet_mourier";
  }
  return "unknown";
}

double SteinEstimate::bound_for(DistanceKind kind) const {
  return distance_constant(kind) * std::sqrt(std::max(msq.value, 0.0));
}

ToeplitzForm::ToeplitzForm(std::span<const double> rho, std::size_t N)
    : N_(N), rho_(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(std::min(rho.size(), N))),
      fft_(good_fft_size(2 * std::max<std::size_t>(N, 1) - 1)) {
  if (N < 1) throw DomainError("ToeplitzForm needs N >= 1");
  if (rho.size() < N) throw RangeError("ToeplitzForm needs rho(0..N-1)");
  const std::size_t L = fft_.size();
  RealBuffer c(L, 0.0);
  c[0] = rho_[0];
  for (std::size_t m = 1; m < N; ++m) {
    c[m] = rho_[m];
    c[L - m] = rho_[m];
  }
  ComplexBuffer spec;
  fft_.forward(c, spec);
  eigenvalues_.resize(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) eigenvalues_[k] = spec[k].real();
}

double ToeplitzForm::direct(std::span<const double> h) const {
  if (h.size() < N_) throw DomainError("ToeplitzForm: vector shorter than N");
  CompensatedSum total;
  double diag = 0.0;
  for (std::size_t k = 0; k < N_; ++k) diag += h[k] * h[k];
  total += rho_[0] * diag;
  for (std::size_t m = 1; m < N_; ++m) {
    double s = 0.0;
    for (std::size_t k = 0; k + m < N_; ++k) s += h[k] * h[k + m];
    total += 2.0 * rho_[m] * s;
  }
  return total.value();
}

double ToeplitzForm::fft(std::span<const double> h, Workspace& ws) const {
  if (h.size() < N_) throw DomainError("ToeplitzForm: vector shorter than N");
  const std::size_t L = fft_.size();
  ws.real.assign(L, 0.0);
  std::copy_n(h.begin(), N_, ws.real.begin());
  fft_.forward(ws.real, ws.spectrum);
  // Parseval over the full spectrum, folded onto the stored half
  const std::size_t half = ws.spectrum.size();
  double s = eigenvalues_[0] * std::norm(ws.spectrum[0]);
  const std::size_t last_paired = (L % 2 == 0) ? half - 1 : half;
  for (std::size_t k = 1; k < last_paired; ++k) s += 2.0 * eigenvalues_[k] * std::norm(ws.spectrum[k]);
  if (L % 2 == 0) s += eigenvalues_[half - 1] * std::norm(ws.spectrum[half - 1]);
  return s / static_cast<double>(L);
}

SteinStatistic::SteinStatistic(const ModelParams& params, const CovarianceTable& cov,
                               double sigma_sq, std::size_t N, ToeplitzMethod method,
                               TNormalization normalization)
    : q_(params.q),
      variance_(cov.rho()[0]),
      scale_(0.0),
      method_(method),
      form_((require_clt(params, "SteinStatistic"), require_lags(cov, N), cov.rho()), N) {
  if (!(sigma_sq > 0.0)) throw DomainError("sigma_sq must be positive");
  const double qf = normalization == TNormalization::corrected ? factorial(q_) : 1.0;
  scale_ = q_ * std::pow(variance_, q_ - 1) / (sigma_sq * static_cast<double>(N) * qf * qf);
  if (method_ == ToeplitzMethod::automatic) {
    method_ = N <= kDirectToeplitzMax ? ToeplitzMethod::direct : ToeplitzMethod::fft;
  }
}

double SteinStatistic::operator()(std::span<const double> X, ToeplitzForm::Workspace& ws) const {
  return evaluate(X, method_, ws);
}

double SteinStatistic::evaluate(std::span<const double> X, ToeplitzMethod method,
                                ToeplitzForm::Workspace& ws) const {
  const std::size_t N = form_.N();
  if (X.size() < N) throw DomainError("SteinStatistic: path shorter than N");
  std::vector<double> h(N);
  const double inv_sd = variance_ == 1.0 ? 1.0 : 1.0 / std::sqrt(variance_);
  for (std::size_t n = 0; n < N; ++n) h[n] = hermite_prob(q_ - 1, X[n] * inv_sd);
  if (method == ToeplitzMethod::automatic) method = method_;
  const double quad = method == ToeplitzMethod::direct ? form_.direct(h) : form_.fft(h, ws);
  return scale_ * quad;
}

double stein_T(const ModelParams& params, const CovarianceTable& cov, const PathBatch& batch,
               double sigma_sq) {
  const SteinStatistic stat(params, cov, sigma_sq, batch.X.size());
  ToeplitzForm::Workspace ws;
  return stat(batch.X, ws);
}

double mean_T_exact(const ModelParams& params, const CovarianceTable& cov, double sigma_sq,
                    std::size_t N) {
  require_clt(params, "mean_T_exact");
  require_lags(cov, N);
  if (!(sigma_sq > 0.0)) throw DomainError("sigma_sq must be positive");
  const auto r = cov.rho();
  const int q = params.q;
  CompensatedSum off;
  for (std::size_t m = 1; m < N; ++m) off += static_cast<double>(N - m) * std::pow(r[m], q);
  const double Nd = static_cast<double>(N);
  return (Nd * std::pow(r[0], q) + 2.0 * off.value()) / (sigma_sq * Nd * factorial(q));
}

SteinEstimate stein_msq_mc(const ModelParams& params, const CovarianceTable& cov,
                           double sigma_sq, std::size_t N, std::size_t reps,
                           std::uint64_t master_seed, const SteinOptions& opts) {
  const std::size_t grid[] = {N};
  return stein_msq_sweep(params, cov, sigma_sq, grid, reps, master_seed, opts).front();
}

std::vector<SteinEstimate> stein_msq_sweep(const ModelParams& params, const CovarianceTable& cov,
                                           double sigma_sq, std::span<const std::size_t> grid,
                                           std::size_t reps, std::uint64_t master_seed,
                                           const SteinOptions& opts) {
  require_clt(params, "stein_msq_sweep");
  if (grid.empty()) throw DomainError("empty N grid");
  if (reps < 2) throw DomainError("stein Monte Carlo needs reps >= 2");
  const std::size_t N_max = *std::max_element(grid.begin(), grid.end());
  require_lags(cov, N_max);

  std::vector<SteinStatistic> stats;
  stats.reserve(grid.size());
  for (std::size_t N : grid) stats.emplace_back(params, cov, sigma_sq, N, opts.toeplitz);
  const PathSimulator sim(cov.weights(), N_max, opts.convolution);

  const unsigned workers = resolve_threads(opts.threads);
  struct Scratch {
    PathSimulator::Workspace path;
    ToeplitzForm::Workspace form;
    std::vector<double> X;
  };
  std::vector<Scratch> scratch(workers);
  const std::size_t G = grid.size();
  std::vector<double> T(reps * G);
  for_each_replicate(reps, workers, [&](std::size_t r, unsigned w) {
    Scratch& s = scratch[w];
    s.X.resize(N_max);
    sim.simulate(master_seed, r, s.X, s.path);
    for (std::size_t g = 0; g < G; ++g) T[r * G + g] = stats[g](s.X, s.form);
  });

  std::vector<SteinEstimate> out;
  std::vector<double> column(reps);
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t r = 0; r < reps; ++r) column[r] = T[r * G + g];
    out.push_back(summarize(grid[g], column, opts.distance));
  }
  return out;
}

QuadraticFormMoments stein_exact_q2(const CovarianceTable& cov, double sigma_sq, std::size_t N) {
  require_lags(cov, N);
  if (N > kDenseMax) throw DomainError("stein_exact_q2 is dense; N must be <= 2048");
  if (!(sigma_sq > 0.0)) throw DomainError("sigma_sq must be positive");
  const std::vector<double> R = dense_toeplitz(cov.rho(), N);
  std::vector<double> P(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < N; ++k) {
      const double a = R[i * N + k];
      const double* rk = &R[k * N];
      double* pi = &P[i * N];
      for (std::size_t j = 0; j < N; ++j) pi[j] += a * rk[j];
    }
  }
  const double kappa = 1.0 / (2.0 * sigma_sq * static_cast<double>(N));
  CompensatedSum tr2, tr4;
  for (std::size_t i = 0; i < N; ++i) tr2 += P[i * N + i];
  for (double p : P) tr4 += p * p;
  return {kappa * tr2.value(), 2.0 * kappa * kappa * tr4.value()};
}

QuadraticFormMoments stein_wick_q2(const CovarianceTable& cov, double sigma_sq, std::size_t N) {
  require_lags(cov, N);
  if (N > kWickMax) throw DomainError("stein_wick_q2 is O(N^4); N must be <= 128");
  if (!(sigma_sq > 0.0)) throw DomainError("sigma_sq must be positive");
  const std::vector<double> R = dense_toeplitz(cov.rho(), N);
  const double kappa = 1.0 / (2.0 * sigma_sq * static_cast<double>(N));
  auto at = [&](std::size_t i, std::size_t j) { return R[i * N + j]; };
  // E x_i x_j = R_ij;  cov(x_i x_j, x_k x_l) = R_ik R_jl + R_il R_jk
  CompensatedSum mean, var;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      mean += kappa * at(i, j) * at(i, j);
      const double cij = kappa * at(i, j);
      double inner = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = 0; l < N; ++l) {
          inner += kappa * at(k, l) * (at(i, k) * at(j, l) + at(i, l) * at(j, k));
        }
      }
      var += cij * inner;
    }
  }
  return {mean.value(), var.value()};
}

BerryEsseenReport berry_esseen_report(const ModelParams& params, const CovarianceTable& cov,
                                      double sigma_sq, std::span<const std::size_t> grid,
                                      std::size_t reps, std::uint64_t master_seed,
                                      const SteinOptions& opts) {
  const RegimeInfo info = classify_regime(params);
  if (info.regime != Regime::clt) throw RegimeError("berry_esseen_report needs the CLT regime");
  if (grid.size() < 4) throw DomainError("a rate fit needs at least 4 grid points");
  BerryEsseenReport report;
  report.points = stein_msq_sweep(params, cov, sigma_sq, grid, reps, master_seed, opts);
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : report.points) {
    pts.emplace_back(static_cast<double>(p.N), std::sqrt(std::max(p.msq.value, 0.0)));
  }
  report.fit = fit_rate(pts, *info.clt_exponent);
  return report;
}

}  // namespace steinlab
