#include <benchmark/benchmark.h>

#include <vector>

#include "steinlab/constants.hpp"
#include "steinlab/covariance.hpp"
#include "steinlab/paths.hpp"
#include "steinlab/rng.hpp"
#include "steinlab/stein.hpp"

using namespace steinlab;

namespace {

void BM_Philox(benchmark::State& state) {
  Philox4x32::Key key{0x12345678u, 0x9abcdef0u};
  Philox4x32::Counter ctr{0, 0, 0, 0};
  for (auto _ : state) {
    ctr[0]++;
    benchmark::DoNotOptimize(Philox4x32::bijection(ctr, key));
  }
  state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_Philox);

void BM_FillNormal(benchmark::State& state) {
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  const PhiloxStream stream(1, 0);
  for (auto _ : state) {
    stream.fill_normal(v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillNormal)->Arg(1 << 12)->Arg(1 << 18);

// args: N, M, method (0 direct, 1 fft)
void BM_Path(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto M = static_cast<std::size_t>(state.range(1));
  const auto method = state.range(2) == 0 ? ConvolutionMethod::direct : ConvolutionMethod::fft;
  const auto w = build_weights({2, 0.75}, M);
  const PathSimulator sim(w, N, method);
  PathSimulator::Workspace ws;
  std::vector<double> X(N);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    sim.simulate(7, rep++, X, ws);
    benchmark::DoNotOptimize(X.data());
  }
}
BENCHMARK(BM_Path)
    ->Args({1024, 4096, 0})
    ->Args({1024, 4096, 1})
    ->Args({8192, 1 << 19, 1})
    ->Unit(benchmark::kMicrosecond);

// args: N, method (0 direct, 1 fft)
void BM_ToeplitzForm(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto cov = CovarianceTable::build({2, 0.9}, 64 * N, N - 1);
  const ToeplitzForm form(cov.rho(), N);
  std::vector<double> h(N);
  PhiloxStream(3, 0).fill_normal(h);
  ToeplitzForm::Workspace ws;
  for (auto _ : state) {
    benchmark::DoNotOptimize(state.range(1) == 0 ? form.direct(h) : form.fft(h, ws));
  }
}
BENCHMARK(BM_ToeplitzForm)
    ->Args({128, 0})
    ->Args({128, 1})
    ->Args({2048, 0})
    ->Args({2048, 1})
    ->Args({8192, 1})
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
