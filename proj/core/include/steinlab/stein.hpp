#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "steinlab/constants.hpp"
#include "steinlab/empirics.hpp"
#include "steinlab/estimate.hpp"
#include "steinlab/fft.hpp"
#include "steinlab/paths.hpp"

namespace steinlab {

class CovarianceTable;

enum class DistanceKind { kolmogorov, wasserstein, total_variation, fortet_mourier };

/// c in  d(F, N(0,1)) <= c sqrt(E (1 - q^-1 |DF|^2)^2):  1, 1, 2, 4.
double distance_constant(DistanceKind kind);
const char* distance_name(DistanceKind kind);

enum class ToeplitzMethod { automatic, direct, fft };

/// h' R h for the symmetric Toeplitz matrix R_kl = rho(|k - l|), k, l < N.
/// The FFT route embeds R in a circulant of length >= 2N - 1 whose
/// eigenvalues are precomputed, so each evaluation costs one real FFT.
class ToeplitzForm {
 public:
  struct Workspace {
    RealBuffer real;
    ComplexBuffer spectrum;
  };

  ToeplitzForm(std::span<const double> rho, std::size_t N);

  std::size_t N() const { return N_; }
  double direct(std::span<const double> h) const;
  double fft(std::span<const double> h, Workspace& ws) const;

 private:
  std::size_t N_;
  std::vector<double> rho_;
  RealFft fft_;
  std::vector<double> eigenvalues_;  // half spectrum, real
};

/// `as_printed` keeps the bare q / (sigma^2 N) prefactor, which omits the
/// 1/q! carried by S_N twice over; its mean tends to (q!)^2, not 1.  Only
/// for showing that discrepancy.
enum class TNormalization { corrected, as_printed };

/// T = q v^(q-1) / (sigma^2 N (q!)^2) sum_{k,l} He_{q-1}(X_k / sqrt v)
///     He_{q-1}(X_l / sqrt v) rho(k - l),   v = rho(0),
/// i.e. q^-1 |D Z_N|^2 for Z_N = S_N / (sigma sqrt N).
class SteinStatistic {
 public:
  SteinStatistic(const ModelParams& params, const CovarianceTable& cov, double sigma_sq,
                 std::size_t N, ToeplitzMethod method = ToeplitzMethod::automatic,
                 TNormalization normalization = TNormalization::corrected);

  std::size_t N() const { return form_.N(); }
  ToeplitzMethod method() const { return method_; }

  /// X holds at least N values; only the first N are used.
  double operator()(std::span<const double> X, ToeplitzForm::Workspace& ws) const;
  double evaluate(std::span<const double> X, ToeplitzMethod method,
                  ToeplitzForm::Workspace& ws) const;

 private:
  int q_;
  double variance_;
  double scale_;
  ToeplitzMethod method_;
  ToeplitzForm form_;
};

double stein_T(const ModelParams& params, const CovarianceTable& cov, const PathBatch& batch,
               double sigma_sq);

/// E[T] = (1 / (sigma^2 N q!)) [N rho(0)^q + 2 sum_{m=1}^{N-1} (N - m) rho(m)^q].
double mean_T_exact(const ModelParams& params, const CovarianceTable& cov, double sigma_sq,
                    std::size_t N);

struct SteinEstimate {
  std::size_t N = 0;
  std::size_t reps = 0;
  Estimate mean_T;
  Estimate msq;  // E[(1 - T)^2]
  DistanceKind distance_kind = DistanceKind::kolmogorov;
  double bound = 0.0;  // distance_constant(distance_kind) * sqrt(msq)

  double bound_for(DistanceKind kind) const;
};

struct SteinOptions {
  unsigned threads = 1;
  DistanceKind distance = DistanceKind::kolmogorov;
  ConvolutionMethod convolution = ConvolutionMethod::automatic;
  ToeplitzMethod toeplitz = ToeplitzMethod::automatic;
};

/// Monte Carlo E[(1 - T)^2] from `reps` paths of the model in `cov`
/// (replicate r uses stream (master_seed, r)).
SteinEstimate stein_msq_mc(const ModelParams& params, const CovarianceTable& cov,
                           double sigma_sq, std::size_t N, std::size_t reps,
                           std::uint64_t master_seed, const SteinOptions& opts = {});

/// Same estimate on every N of `grid` from common random numbers: each
/// replicate simulates one path of length max(grid) and T_N is taken on
/// its first N values.
std::vector<SteinEstimate> stein_msq_sweep(const ModelParams& params, const CovarianceTable& cov,
                                           double sigma_sq, std::span<const std::size_t> grid,
                                           std::size_t reps, std::uint64_t master_seed,
                                           const SteinOptions& opts = {});

struct QuadraticFormMoments {
  double mean = 0.0;
  double variance = 0.0;
  /// E[(1 - T)^2] = (1 - E T)^2 + Var T
  double msq() const { return (1.0 - mean) * (1.0 - mean) + variance; }
};

/// q = 2: T = x' C x with C = R / (2 sigma^2 N) and x ~ N(0, R), so
/// E T = tr(CR) and Var T = 2 tr(CRCR); dense products, O(N^3).
QuadraticFormMoments stein_exact_q2(const CovarianceTable& cov, double sigma_sq, std::size_t N);

/// The same moments by explicit Isserlis pairings, O(N^4).
QuadraticFormMoments stein_wick_q2(const CovarianceTable& cov, double sigma_sq, std::size_t N);

struct BerryEsseenReport {
  std::vector<SteinEstimate> points;
  RateFit fit;  // of sqrt(msq) against N
};

/// Rate sweep over `grid` (>= 4 distinct N) with the CLT exponent attached.
BerryEsseenReport berry_esseen_report(const ModelParams& params, const CovarianceTable& cov,
                                      double sigma_sq, std::span<const std::size_t> grid,
                                      std::size_t reps, std::uint64_t master_seed,
                                      const SteinOptions& opts = {});

}  // namespace steinlab
