#include "steinlab/paths.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "steinlab/covariance.hpp"
#include "steinlab/errors.hpp"
#include "steinlab/hermite.hpp"
#include "steinlab/rng.hpp"
#include "steinlab/special.hpp"
#include "steinlab/summation.hpp"

namespace steinlab {

void PathConfig::validate() const {
  if (N < 1) throw DomainError("path horizon N must be >= 1");
  if (M < 1) throw DomainError("weight truncation M must be >= 1");
}

std::size_t truncation_length(double beta, double delta_sq, std::size_t cap) {
  ModelParams{1, beta}.validate();
  if (!(delta_sq > 0.0 && delta_sq < 1.0)) throw DomainError("delta_sq must lie in (0, 1)");
  const double a = 2.0 * beta - 1.0;
  const auto tail = [a](double M) { return std::pow(M, -a) / a; };
  const double root = std::pow(delta_sq * a, -1.0 / a);
  if (!(root <= static_cast<double>(cap))) {
    throw TruncationOverflow("truncation length " + std::to_string(root) + " exceeds cap " +
                             std::to_string(cap));
  }
  std::size_t M = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(root)));
  while (M > 1 && tail(static_cast<double>(M - 1)) <= delta_sq) --M;
  while (tail(static_cast<double>(M)) > delta_sq) ++M;
  if (M > cap) throw TruncationOverflow("truncation length exceeds cap");
  return M;
}

PathSimulator::PathSimulator(std::span<const double> weights, std::size_t N,
                             ConvolutionMethod method, double direct_work_limit)
    : weights_(weights.begin(), weights.end()), N_(N), method_(method) {
  if (weights_.empty()) throw DomainError("PathSimulator needs at least one weight");
  if (N < 1) throw DomainError("PathSimulator needs N >= 1");
  if (method_ == ConvolutionMethod::automatic) {
    const double work = static_cast<double>(N) * static_cast<double>(weights_.size());
    method_ = work <= direct_work_limit ? ConvolutionMethod::direct : ConvolutionMethod::fft;
  }
  if (method_ == ConvolutionMethod::fft) {
    const std::size_t L = good_fft_size(N + weights_.size());
    fft_.emplace(L);
    RealBuffer a(L, 0.0);
    std::copy(weights_.begin(), weights_.end(), a.begin());
    fft_->forward(a, weight_spectrum_);
    const double scale = 1.0 / static_cast<double>(L);
    for (auto& z : weight_spectrum_) z *= scale;
  }
}

void PathSimulator::simulate(std::uint64_t master_seed, std::uint64_t replicate,
                             std::span<double> X, Workspace& ws) const {
  if (X.size() != N_) throw DomainError("output span must hold N values");
  const std::size_t M = weights_.size();
  const std::size_t total = N_ + M;
  const PhiloxStream stream(master_seed, replicate);

  if (method_ == ConvolutionMethod::direct) {
    ws.noise.resize(total);
    stream.fill_normal(ws.noise);
    // X_n = sum_i alpha_i e[n + M - i], n = 1..N
    for (std::size_t n = 1; n <= N_; ++n) {
      const double* e = ws.noise.data() + n + M - 1;  // e[n + M - 1] pairs with alpha_1
      double s = 0.0;
      for (std::size_t i = 0; i < M; ++i) s += weights_[i] * e[-static_cast<std::ptrdiff_t>(i)];
      X[n - 1] = s;
    }
    return;
  }

  const std::size_t L = fft_->size();
  ws.real.assign(L, 0.0);
  stream.fill_normal(std::span<double>(ws.real.data(), total));
  fft_->forward(ws.real, ws.spectrum);
  for (std::size_t k = 0; k < ws.spectrum.size(); ++k) ws.spectrum[k] *= weight_spectrum_[k];
  fft_->inverse(ws.spectrum, ws.real);
  std::copy_n(ws.real.begin() + static_cast<std::ptrdiff_t>(M), N_, X.begin());
}

PathBatch simulate_path(const ModelParams& params, const PathConfig& cfg,
                        std::span<const double> weights, ConvolutionMethod method) {
  params.validate();
  cfg.validate();
  if (weights.size() != cfg.M) throw DomainError("weights must have cfg.M entries");
  PathSimulator sim(weights, cfg.N, method);
  PathSimulator::Workspace ws;
  PathBatch batch;
  batch.config = cfg;
  batch.X.resize(cfg.N);
  sim.simulate(cfg.master_seed, cfg.replicate_index, batch.X, ws);
  batch.variance = rho_direct(weights, 0);
  batch.trunc_var_deficit = special::power_tail_sum(2.0 * params.beta, cfg.M + 1).value;
  return batch;
}

double s_n(int q, std::span<const double> X, double variance) {
  if (q < 1) throw DomainError("s_n needs q >= 1");
  if (!(variance > 0.0)) throw DomainError("s_n needs a positive variance");
  CompensatedSum s;
  if (variance == 1.0) {
    for (double x : X) s += hermite_paper(q, x);
    return s.value();
  }
  const double sd = std::sqrt(variance);
  for (double x : X) s += hermite_paper(q, x / sd);
  return std::pow(variance, 0.5 * q) * s.value();
}

double s_n(const ModelParams& params, const PathBatch& batch) {
  params.validate();
  return s_n(params.q, batch.X, batch.variance);
}

double z_clt(const ModelParams& params, double sigma_sq, std::size_t N, double s) {
  if (classify_regime(params).regime != Regime::clt) throw RegimeError("z_clt needs the CLT regime");
  if (!(sigma_sq > 0.0) || N < 1) throw DomainError("z_clt needs sigma_sq > 0 and N >= 1");
  return s / std::sqrt(sigma_sq * static_cast<double>(N));
}

double z_nclt(const ModelParams& params, double h, std::size_t N, double s) {
  if (classify_regime(params).regime != Regime::nclt) {
    throw RegimeError("z_nclt needs the NCLT regime");
  }
  if (!(h > 0.0) || N < 1) throw DomainError("z_nclt needs h > 0 and N >= 1");
  const double e = params.beta * params.q - 0.5 * params.q - 1.0;
  return s / h * std::pow(static_cast<double>(N), e);
}

double z_nclt_second_moment(const ModelParams& params, const CovarianceTable& cov, double h,
                            std::size_t N) {
  if (classify_regime(params).regime != Regime::nclt) {
    throw RegimeError("z_nclt_second_moment needs the NCLT regime");
  }
  if (N < 1 || N - 1 > cov.m_max()) throw RangeError("covariance table too short for N");
  const auto r = cov.rho();
  const int q = params.q;
  CompensatedSum off;
  for (std::size_t l = 1; l < N; ++l) off += static_cast<double>(N - l) * std::pow(r[l], q);
  const double Nd = static_cast<double>(N);
  const double lag_sum = Nd * std::pow(r[0], q) + 2.0 * off.value();
  const double p = 2.0 * params.beta * q - q - 2.0;
  return std::pow(Nd, p) * lag_sum / (factorial(q) * h * h);
}

namespace {

constexpr std::array<char, 4> kMagic{'L', 'M', 'M', 'A'};
constexpr std::uint32_t kDumpVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw DomainError("truncated path dump");
  return to_little(v);
}

}  // namespace

void write_path_dump(const std::filesystem::path& file, const PathBatch& batch) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + file.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, kDumpVersion);
  put<std::uint64_t>(os, batch.X.size());
  put<std::uint64_t>(os, batch.config.M);
  put<std::uint64_t>(os, batch.config.master_seed);
  put<std::uint64_t>(os, batch.config.replicate_index);
  for (double x : batch.X) put<double>(os, x);
  if (!os) throw Error("write failed for " + file.string());
}

PathBatch read_path_dump(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error("cannot open " + file.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw DomainError("not a path dump: bad magic");
  if (get<std::uint32_t>(is) != kDumpVersion) throw DomainError("unsupported path dump version");
  PathBatch b;
  b.config.N = get<std::uint64_t>(is);
  b.config.M = get<std::uint64_t>(is);
  b.config.master_seed = get<std::uint64_t>(is);
  b.config.replicate_index = get<std::uint64_t>(is);
  b.X.resize(b.config.N);
  for (double& x : b.X) x = get<double>(is);
  return b;
}

}  // namespace steinlab
