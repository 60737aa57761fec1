#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "steinlab/constants.hpp"
#include "steinlab/covariance.hpp"
#include "steinlab/errors.hpp"
#include "steinlab/paths.hpp"
#include "steinlab/special.hpp"

using namespace steinlab;

namespace {

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mu = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return {mu, std::sqrt(ss / (n - 1) / n)};
}

double tail_oracle(double beta, double M) {
  const double a = 2 * beta - 1;
  return std::pow(M, -a) / a;
}

// (1/q!) sum_{n,m<=N} rho(|n-m|)^q
double exact_var_sn(std::span<const double> r, int q, std::size_t N) {
  long double s = static_cast<long double>(N) * std::pow(static_cast<long double>(r[0]), q);
  for (std::size_t l = 1; l < N; ++l) {
    s += 2.0L * static_cast<long double>(N - l) * std::pow(static_cast<long double>(r[l]), q);
  }
  return static_cast<double>(s) / factorial(q);
}

}  // namespace

TEST(TruncationLength, Examples) {
  EXPECT_EQ(truncation_length(0.75, 0.25), 64u);
  const std::size_t M = truncation_length(0.9, 1e-4);
  EXPECT_LE(tail_oracle(0.9, static_cast<double>(M)), 1e-4);
  EXPECT_GT(tail_oracle(0.9, static_cast<double>(M - 1)), 1e-4);
  EXPECT_NEAR(static_cast<double>(M), 1.3e5, 0.05e5);
  EXPECT_EQ(truncation_length(0.75, 0.99), 1u + 4u);  // 2/sqrt(M) <= 0.99 first at M = 5
  EXPECT_EQ(truncation_length(0.99, 0.999), 2u);
  EXPECT_THROW(truncation_length(0.75, 1.5), DomainError);
  EXPECT_THROW(truncation_length(0.75, 0.0), DomainError);
  EXPECT_THROW(truncation_length(0.51, 1e-6), TruncationOverflow);
  EXPECT_THROW(truncation_length(0.75, 1e-3, 1000), TruncationOverflow);
}

TEST(TruncationLength, MinimalOverGrid) {
  for (double beta : {0.55, 0.7, 0.95}) {
    for (double d : {0.5, 0.1, 0.01}) {
      std::size_t M = 0;
      try {
        M = truncation_length(beta, d);
      } catch (const TruncationOverflow&) {
        continue;
      }
      EXPECT_LE(tail_oracle(beta, static_cast<double>(M)), d);
      if (M > 1) EXPECT_GT(tail_oracle(beta, static_cast<double>(M - 1)), d);
    }
  }
}

TEST(Paths, ConfigValidation) {
  EXPECT_THROW((PathConfig{0, 1, 0, 0}.validate()), DomainError);
  EXPECT_THROW((PathConfig{1, 0, 0, 0}.validate()), DomainError);
  const auto w = build_weights({2, 0.7}, 8);
  EXPECT_THROW(simulate_path({2, 0.7}, {4, 9, 0, 0}, w), DomainError);
}

TEST(Paths, DeterministicAndReplicateSensitive) {
  const ModelParams p{2, 0.7};
  const auto w = build_weights(p, 300);
  const auto a = simulate_path(p, {200, 300, 99, 3}, w);
  const auto b = simulate_path(p, {200, 300, 99, 3}, w);
  ASSERT_EQ(a.X.size(), 200u);
  EXPECT_EQ(std::memcmp(a.X.data(), b.X.data(), 200 * sizeof(double)), 0);
  const auto c = simulate_path(p, {200, 300, 99, 4}, w);
  const auto d = simulate_path(p, {200, 300, 100, 3}, w);
  EXPECT_NE(a.X, c.X);
  EXPECT_NE(a.X, d.X);
  for (double x : a.X) EXPECT_TRUE(std::isfinite(x));
  EXPECT_NEAR(a.variance, 1.0, 1e-15);
  EXPECT_NEAR(a.trunc_var_deficit, special::power_tail_sum(1.4, 301).value, 1e-15);
}

TEST(Paths, HandConvolutionWithTinyWeights) {
  // M = 1: X_n = eps_{n-1}, the innovation stream itself
  const ModelParams p{1, 0.8};
  const std::vector<double> w1{1.0};
  const auto one = simulate_path(p, {50, 1, 7, 0}, w1);
  const std::vector<double> w2{0.6, 0.8};
  const auto two = simulate_path(p, {50, 2, 7, 0}, w2);
  // with M = 2 the innovation array is shifted by one slot relative to M = 1
  for (std::size_t n = 1; n < 50; ++n) {
    EXPECT_NEAR(two.X[n - 1], 0.6 * one.X[n] + 0.8 * one.X[n - 1], 1e-15) << n;
  }
}

TEST(Paths, DirectAndFftAgree) {
  const ModelParams p{2, 0.75};
  const auto w = build_weights(p, 4096);
  const PathSimulator direct(w, 1024, ConvolutionMethod::direct);
  const PathSimulator fft(w, 1024, ConvolutionMethod::fft);
  EXPECT_EQ(direct.method(), ConvolutionMethod::direct);
  EXPECT_EQ(fft.method(), ConvolutionMethod::fft);
  PathSimulator::Workspace ws;
  std::vector<double> a(1024), b(1024);
  for (std::uint64_t r = 0; r < 3; ++r) {
    direct.simulate(5, r, a, ws);
    fft.simulate(5, r, b, ws);
    for (std::size_t n = 0; n < 1024; ++n) ASSERT_NEAR(a[n], b[n], 1e-10) << r << " " << n;
  }
  EXPECT_EQ(PathSimulator(w, 1024).method(), ConvolutionMethod::fft);
  EXPECT_EQ(PathSimulator(w, 16).method(), ConvolutionMethod::direct);
}

TEST(Paths, MomentsAndLagOneCovariance) {
  const ModelParams p{2, 0.75};
  const std::size_t N = 100000, M = 1024, reps = 100;
  const auto w = build_weights(p, M);
  const auto cov = CovarianceTable::build(p, M, 1);
  const PathSimulator sim(w, N);
  PathSimulator::Workspace ws;
  std::vector<double> X(N), means, vars, lag1;
  for (std::size_t r = 0; r < reps; ++r) {
    sim.simulate(11, r, X, ws);
    double s = 0, s2 = 0, c1 = 0;
    for (std::size_t n = 0; n < N; ++n) {
      s += X[n];
      s2 += X[n] * X[n];
      if (n + 1 < N) c1 += X[n] * X[n + 1];
    }
    means.push_back(s / N);
    vars.push_back(s2 / N);
    lag1.push_back(c1 / (N - 1));
  }
  // long memory makes the mean far noisier than the iid band, so the band
  // comes from the spread across replicates
  const auto m = mean_se(means);
  EXPECT_LE(std::abs(m.mean), 4 * m.se);
  const auto v = mean_se(vars);
  EXPECT_LE(std::abs(v.mean - 1.0), 4 * v.se);
  const auto c = mean_se(lag1);
  EXPECT_LE(std::abs(c.mean - cov.rho()[1]), 4 * c.se);
}

TEST(Paths, StreamsAreUncorrelated) {
  const std::vector<double> w{1.0};
  const std::size_t N = 200000;
  const auto a = simulate_path({1, 0.8}, {N, 1, 3, 0}, w);
  const auto b = simulate_path({1, 0.8}, {N, 1, 3, 1}, w);
  const auto c = simulate_path({1, 0.8}, {N, 1, 4, 0}, w);
  double ab = 0, ac = 0;
  for (std::size_t n = 0; n < N; ++n) {
    ab += a.X[n] * b.X[n];
    ac += a.X[n] * c.X[n];
  }
  EXPECT_LE(std::abs(ab / N), 4 / std::sqrt(static_cast<double>(N)));
  EXPECT_LE(std::abs(ac / N), 4 / std::sqrt(static_cast<double>(N)));
}

TEST(SN, Examples) {
  const std::vector<double> X{0.5, -1.0, 2.0};
  EXPECT_DOUBLE_EQ(s_n(1, X), 1.5);
  EXPECT_DOUBLE_EQ(s_n(2, X), (0.25 - 1 + 0 + 4 - 1) / 2);
  // chaos scaling for variance 4: v H_2(x / 2) = (x^2 - v) / 2
  EXPECT_NEAR(s_n(2, X, 4.0), (0.25 - 4 + 1 - 4 + 4 - 4) / 2, 1e-15);
  EXPECT_THROW(s_n(0, X), DomainError);
  EXPECT_THROW(s_n(2, X, 0.0), DomainError);
}

TEST(SN, CenteredAndVarianceMatchesSigma) {
  const ModelParams p{3, 0.9};
  const std::size_t N = 4096, M = 16 * N, reps = 400;
  const auto w = build_weights(p, M);
  const auto cov = CovarianceTable::build(p, M, M - 1);
  const double sigma_sq = sigma_qbeta(p, cov).value;
  const double exact = exact_var_sn(cov.rho(), 3, N);
  const PathSimulator sim(w, N);
  PathSimulator::Workspace ws;
  std::vector<double> X(N), s, z, sq;
  for (std::size_t r = 0; r < reps; ++r) {
    sim.simulate(77, r, X, ws);
    const double v = s_n(3, X);
    s.push_back(v);
    z.push_back(z_clt(p, sigma_sq, N, v));
    sq.push_back(v * v);
  }
  const auto m = mean_se(s);
  EXPECT_LE(std::abs(m.mean), 4 * m.se);
  const auto v = mean_se(sq);
  EXPECT_LE(std::abs(v.mean - exact), 4 * v.se);
  // the finite-N variance approaches N sigma^2 from below
  EXPECT_LT(exact, N * sigma_sq);
  EXPECT_GT(exact / (N * sigma_sq), 0.8);
  EXPECT_LE(std::abs(v.mean / (N * sigma_sq) - 1.0), 4 * v.se / (N * sigma_sq) + 0.2);
  std::vector<double> z2;
  for (double x : z) z2.push_back(x * x);
  const auto zz = mean_se(z2);
  EXPECT_LE(std::abs(zz.mean - exact / (N * sigma_sq)), 4 * zz.se);
}

TEST(ZFunctions, ScalingAndRegimes) {
  const ModelParams clt{3, 0.9}, nclt{2, 0.7};
  EXPECT_EQ(z_clt(clt, 2.0, 10, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(z_clt(clt, 2.0, 8, 4.0), 1.0);
  EXPECT_EQ(z_nclt(nclt, 1.3, 10, 0.0), 0.0);
  EXPECT_NEAR(z_nclt(nclt, 2.0, 1024, 3.0), 1.5 * std::pow(1024.0, 1.4 - 1.0 - 1.0), 1e-15);
  EXPECT_THROW(z_clt(nclt, 1.0, 10, 1.0), RegimeError);
  EXPECT_THROW(z_nclt(clt, 1.0, 10, 1.0), RegimeError);
  EXPECT_THROW(z_clt(clt, 0.0, 10, 1.0), DomainError);
}

TEST(ZFunctions, NcltSecondMomentMatchesMonteCarlo) {
  const ModelParams p{2, 0.7};
  const std::size_t N = 1024, M = 64 * N, reps = 400;
  const auto w = build_weights(p, M);
  const auto cov = CovarianceTable::build(p, M, N);
  const double h = h_qbeta(p, cov_constant(p));
  const double exact = z_nclt_second_moment(p, cov, h, N);
  EXPECT_NEAR(exact,
              std::pow(1024.0, 2 * 0.7 * 2 - 2 - 2) * exact_var_sn(cov.rho(), 2, N) / (h * h),
              1e-12 * exact);
  const PathSimulator sim(w, N);
  PathSimulator::Workspace ws;
  std::vector<double> X(N), z2;
  for (std::size_t r = 0; r < reps; ++r) {
    sim.simulate(8, r, X, ws);
    const double z = z_nclt(p, h, N, s_n(2, X));
    z2.push_back(z * z);
  }
  const auto m = mean_se(z2);
  EXPECT_LE(std::abs(m.mean - exact), 4 * m.se);
  EXPECT_THROW(z_nclt_second_moment(p, cov, h, N + 2), RangeError);
}

TEST(PathDump, RoundTripAndRejects) {
  const ModelParams p{2, 0.8};
  const auto w = build_weights(p, 33);
  const auto batch = simulate_path(p, {17, 33, 123456789, 42}, w);
  const auto dir = std::filesystem::temp_directory_path() / "steinlab_dump_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "path.bin";
  write_path_dump(file, batch);
  EXPECT_EQ(std::filesystem::file_size(file), 4u + 4u + 4 * 8u + 17 * 8u);
  const auto back = read_path_dump(file);
  EXPECT_EQ(back.config.N, 17u);
  EXPECT_EQ(back.config.M, 33u);
  EXPECT_EQ(back.config.master_seed, 123456789u);
  EXPECT_EQ(back.config.replicate_index, 42u);
  EXPECT_EQ(std::memcmp(back.X.data(), batch.X.data(), 17 * sizeof(double)), 0);

  std::filesystem::resize_file(file, 40);
  EXPECT_THROW(read_path_dump(file), DomainError);
  {
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    os << "NOPE0000";
  }
  EXPECT_THROW(read_path_dump(file), DomainError);
  EXPECT_THROW(read_path_dump(dir / "missing.bin"), Error);
  std::filesystem::remove_all(dir);
}
