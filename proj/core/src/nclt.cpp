#include "steinlab/nclt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steinlab/covariance.hpp"
#include "steinlab/errors.hpp"
#include "steinlab/parallel.hpp"
#include "steinlab/paths.hpp"
#include "steinlab/special.hpp"
#include "steinlab/summation.hpp"

namespace steinlab {

namespace {

constexpr std::size_t kQuadMaxN = 32;

ModelParams literal(const ModelParams& params) {
  ModelParams p = params;
  p.normalize_weights = false;
  if (classify_regime(p).regime != Regime::nclt) {
    throw RegimeError("kernel quantities need q(2 beta - 1) < 1");
  }
  return p;
}

double scale_exponent(const ModelParams& p) { return 2.0 * p.beta * p.q - p.q - 2.0; }

void check_table(const InnerSeriesTable& r, const ModelParams& p, std::size_t N) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (r.beta() != p.beta) throw DomainError("inner-series table built for another beta");
  if (r.max_lag() < N) throw RangeError("inner-series table too short for N");
}

// sum_{l=1}^{N} (N - l) r(l)^q
double weighted_lag_sum(const InnerSeriesTable& r, int q, std::size_t N) {
  CompensatedSum s;
  for (std::size_t l = 1; l < N; ++l) s += static_cast<double>(N - l) * std::pow(r[l], q);
  return s.value();
}

}  // namespace

InnerSeriesTable::InnerSeriesTable(double beta, std::size_t max_lag) : beta_(beta) {
  ModelParams{1, beta}.validate();
  values_.resize(max_lag + 1);
  for (std::size_t m = 0; m <= max_lag; ++m) {
    const Estimate e = special::pair_series(beta, static_cast<double>(m));
    values_[m] = e.value;
    max_error_ = std::max(max_error_, e.error);
  }
}

double g_norm_sq(const ModelParams& params, const InnerSeriesTable& r, std::size_t N) {
  const ModelParams p = literal(params);
  check_table(r, p, N);
  const double Nd = static_cast<double>(N);
  const double lag_sum = Nd * std::pow(r[0], p.q) + 2.0 * weighted_lag_sum(r, p.q, N);
  return std::pow(Nd, scale_exponent(p)) * lag_sum;
}

double g_norm_sq(const ModelParams& params, std::size_t N) {
  return g_norm_sq(params, InnerSeriesTable(params.beta, N), N);
}

double g_inner(const ModelParams& params, const InnerSeriesTable& r, std::size_t N) {
  const ModelParams p = literal(params);
  check_table(r, p, N);
  const double d = d_qbeta(p, c_beta(p.beta));
  return 2.0 * d * std::pow(static_cast<double>(N), scale_exponent(p)) *
         weighted_lag_sum(r, p.q, N);
}

double g_inner(const ModelParams& params, std::size_t N) {
  return g_inner(params, InnerSeriesTable(params.beta, N), N);
}

double g_inner_quad(const ModelParams& params, std::size_t N, const QuadratureOptions& opts,
                    std::size_t direct_terms) {
  const ModelParams p = literal(params);
  if (N < 1 || N > kQuadMaxN) throw DomainError("g_inner_quad is an oracle for N <= 32");
  if (direct_terms < N + 2) throw DomainError("g_inner_quad needs more direct terms than N");
  const double beta = p.beta;
  const double e = 1.0 - beta;
  const double I = static_cast<double>(direct_terms);

  // In the variable v = n - N u the closed-form y-integral of the n-th
  // summand becomes N^(beta-1) G(v) with
  //   G(v) = sum_i i^(-beta) [(i+1-v)_+^e - (i-v)_+^e] / e = sum_i i^(-beta) int_i^{i+1} (x-v)^(-beta) dx.
  const auto G = [&](double v) {
    CompensatedSum s;
    for (std::size_t i = direct_terms; i >= 1; --i) {
      const double x = static_cast<double>(i);
      const double hi = x + 1.0 - v;
      if (hi <= 0.0) break;
      const double lo = x - v;
      const double piece = std::pow(hi, e) - (lo > 0.0 ? std::pow(lo, e) : 0.0);
      s += std::pow(x, -beta) * piece / e;
    }
    // i > I: i^(-beta) ~ (x - 1/2)^(-beta) on [i, i+1]
    const double shift = std::max(v, 0.5);
    s += special::pair_tail_integral(beta, std::abs(v - 0.5), I + 1.0 - shift);
    return s.value();
  };

  const long n_cells_lo = 2 - static_cast<long>(N);
  CompensatedSum total;
  for (long k = n_cells_lo; k <= static_cast<long>(N); ++k) {
    // number of n in 1..N whose range [n - N, n] covers the cell [k-1, k]
    const long lo = std::max<long>(k, 1);
    const long hi = std::min<long>(k - 1 + static_cast<long>(N), static_cast<long>(N));
    if (hi < lo) continue;
    const double weight = static_cast<double>(hi - lo + 1);
    // (k - v)^e is the only non-smooth term on the cell: t = k - v = s^(1/e)
    const double kd = static_cast<double>(k);
    const auto f = [&](double s) {
      if (s <= 0.0) return 0.0;
      const double t = std::pow(s, 1.0 / e);
      const double jac = std::pow(s, 1.0 / e - 1.0) / e;
      return std::pow(G(kd - t), p.q) * jac;
    };
    const Estimate cell = integrate(f, 0.0, 1.0, opts);
    total += weight * cell.value;
  }
  const double d = d_qbeta(p, c_beta(beta));
  return d * std::pow(static_cast<double>(N), scale_exponent(p)) * total.value();
}

KernelError kernel_error(const ModelParams& params, const InnerSeriesTable& r, std::size_t N) {
  const ModelParams p = literal(params);
  check_table(r, p, N);
  const double c = c_beta(p.beta);
  const double h = h_qbeta(p, c);
  const double qf = factorial(p.q);
  KernelError k;
  k.N = N;
  k.g_norm_sq = g_norm_sq(p, r, N);
  k.inner = g_inner(p, r, N);
  // expanding the square leaves N^p [N r(0)^q - 2 S] / (h q!)^2 + 1/q!, which
  // avoids subtracting the two O(1) terms
  const double Nd = static_cast<double>(N);
  const double S = weighted_lag_sum(r, p.q, N);
  k.err_sq = std::pow(Nd, scale_exponent(p)) * (Nd * std::pow(r[0], p.q) - 2.0 * S) /
                 (h * h * qf * qf) + 1.0 / qf;
  k.theoretical_exponent = 2.0 * p.beta * p.q - p.q - 1.0;
  return k;
}

KernelError kernel_error(const ModelParams& params, std::size_t N) {
  return kernel_error(params, InnerSeriesTable(params.beta, N), N);
}

double renorm_second_moment(const ModelParams& params, const InnerSeriesTable& r, std::size_t N) {
  const ModelParams p = literal(params);
  const double h = h_qbeta(p, c_beta(p.beta));
  return g_norm_sq(p, r, N) / (h * h * factorial(p.q));
}

double renorm_second_moment(const ModelParams& params, std::size_t N) {
  return renorm_second_moment(params, InnerSeriesTable(params.beta, N), N);
}

std::vector<double> hermite_surrogate_sample(const ModelParams& params, std::size_t N_ref,
                                             std::size_t reps, std::uint64_t seed,
                                             const SurrogateOptions& opts) {
  const ModelParams p = literal(params);
  if (N_ref < 1 || reps < 1) throw DomainError("surrogate needs N_ref >= 1 and reps >= 1");
  if (opts.trunc_factor < 1) throw DomainError("trunc_factor must be >= 1");
  const std::size_t M = opts.trunc_factor * N_ref;
  const std::vector<double> w = build_weights(p, M);
  const double variance = rho_direct(w, 0);
  const double h = h_qbeta(p, c_beta(p.beta));
  const PathSimulator sim(w, N_ref);
  const unsigned workers = resolve_threads(opts.threads);
  std::vector<PathSimulator::Workspace> ws(workers);
  std::vector<std::vector<double>> X(workers, std::vector<double>(N_ref));
  std::vector<double> out(reps);
  for_each_replicate(reps, workers, [&](std::size_t r, unsigned k) {
    sim.simulate(seed, r, X[k], ws[k]);
    out[r] = z_nclt(p, h, N_ref, s_n(p.q, X[k], variance));
  });
  return out;
}

}  // namespace steinlab
