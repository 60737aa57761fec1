#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "steinlab/constants.hpp"
#include "steinlab/fft.hpp"

namespace steinlab {

class CovarianceTable;

/// One trajectory request.  Its innovations come from the Philox stream
/// (key = master_seed, counter high word = replicate_index), so every
/// (seed, replicate) pair owns a disjoint stream.
struct PathConfig {
  std::size_t N = 1;
  std::size_t M = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;

  void validate() const;
};

struct PathBatch {
  std::vector<double> X;
  PathConfig config;
  /// Var X_n = sum of squared weights (1 for normalized weights).
  double variance = 1.0;
  /// sum_{i>M} i^(-2 beta): variance of the untruncated raw model that the
  /// M retained weights miss, before any normalization.
  double trunc_var_deficit = 0.0;
};

/// Largest M truncation_length will return by default (2 GiB of weights).
inline constexpr std::size_t kDefaultTruncationCap = std::size_t{1} << 28;

/// Smallest M with M^(1 - 2 beta) / (2 beta - 1) <= delta_sq.  Throws
/// TruncationOverflow when that M exceeds cap.
std::size_t truncation_length(double beta, double delta_sq,
                              std::size_t cap = kDefaultTruncationCap);

enum class ConvolutionMethod { automatic, direct, fft };

/// Below this many multiply-adds (N * M) `automatic` convolves directly.
inline constexpr double kDirectConvolutionWork = 2097152.0;  // 2^21

/// Simulates X_n = sum_{i=1}^M alpha_i eps_{n-i}, n = 1..N, from N + M
/// standard normal innovations stored as e[k] = eps_{k-M}.
class PathSimulator {
 public:
  /// Per-thread scratch; reused across calls to avoid reallocation.
  struct Workspace {
    std::vector<double> noise;
    RealBuffer real;
    ComplexBuffer spectrum;
  };

  PathSimulator(std::span<const double> weights, std::size_t N,
                ConvolutionMethod method = ConvolutionMethod::automatic,
                double direct_work_limit = kDirectConvolutionWork);

  std::size_t N() const { return N_; }
  std::size_t M() const { return weights_.size(); }
  /// Resolved method (never automatic).
  ConvolutionMethod method() const { return method_; }
  std::span<const double> weights() const { return weights_; }

  /// Writes X_1..X_N into X (size N).
  void simulate(std::uint64_t master_seed, std::uint64_t replicate, std::span<double> X,
                Workspace& ws) const;

 private:
  std::vector<double> weights_;
  std::size_t N_;
  ConvolutionMethod method_;
  std::optional<RealFft> fft_;
  ComplexBuffer weight_spectrum_;
};

/// One-off simulation; `weights` must hold cfg.M entries from build_weights.
PathBatch simulate_path(const ModelParams& params, const PathConfig& cfg,
                        std::span<const double> weights,
                        ConvolutionMethod method = ConvolutionMethod::automatic);

/// S_N = sum_n H_q(X_n) when Var X_n = 1.  For another variance v the
/// summand is v^(q/2) H_q(X_n / sqrt v), the same q-th chaos element
/// written for the unnormalized kernel, which keeps S_N centered.
double s_n(int q, std::span<const double> X, double variance = 1.0);
double s_n(const ModelParams& params, const PathBatch& batch);

/// s / (sigma sqrt N); RegimeError outside the CLT regime.
double z_clt(const ModelParams& params, double sigma_sq, std::size_t N, double s);

/// h^-1 N^(beta q - q/2 - 1) s; RegimeError outside the NCLT regime.
double z_nclt(const ModelParams& params, double h, std::size_t N, double s);

/// E[z_nclt^2] for paths of the model in `cov` (exact, O(N)):
///   h^-2 N^(2 beta q - q - 2) (1/q!) sum_{n,m<=N} rho(|n-m|)^q.
double z_nclt_second_moment(const ModelParams& params, const CovarianceTable& cov, double h,
                            std::size_t N);

/// Binary dump: "LMMA", u32 version, u64 N, M, seed, replicate, then N
/// doubles, all little-endian.
void write_path_dump(const std::filesystem::path& file, const PathBatch& batch);
PathBatch read_path_dump(const std::filesystem::path& file);

}  // namespace steinlab
