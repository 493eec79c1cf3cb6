// Serial vs OpenMP filter-bank kernels on the two preset shapes.
//   simplified: 240 signals x 205 samples, 2 filters at 256 Hz
//   gw:         128 slices x 128 samples, 20 filters at 128 Hz

#include <benchmark/benchmark.h>

#include <random>

#include "wavenet/cwt_kernels.hpp"
#include "wavenet/model.hpp"

using namespace wavenet;

namespace {

struct Workload {
  Tensor3 x;
  Tensor3 upstream;
  std::vector<SampledKernel> bank;
};

Workload make_workload(int which) {
  const bool gw = which == 1;
  const std::size_t n = gw ? 128 : 240, t = gw ? 128 : 205;
  const double rate = gw ? 128.0 : 256.0;
  const std::vector<double> freqs = gw ? linspace(1.5, 25.0, 20) : std::vector<double>{8.0, 12.0};
  Workload w;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  w.x = Tensor3(n, 1, t);
  for (auto& v : w.x.data) v = g(rng);
  w.upstream = Tensor3(n, freqs.size(), t);
  for (auto& v : w.upstream.data) v = g(rng);
  for (double f : freqs) w.bank.push_back(sample_kernel({f, 10.0}, rate, kDefaultTruncSigmas, t - 1));
  return w;
}

template <bool Parallel>
void BM_forward(benchmark::State& state) {
  const Workload w = make_workload(static_cast<int>(state.range(0)));
  kernels::BankCache cache;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::bank_forward_parallel(w.x, w.bank, kMagnitudeEps, cache);
    else
      kernels::bank_forward_serial(w.x, w.bank, kMagnitudeEps, cache);
    benchmark::DoNotOptimize(cache.out.data.data());
  }
}

template <bool Parallel>
void BM_backward(benchmark::State& state) {
  const Workload w = make_workload(static_cast<int>(state.range(0)));
  kernels::BankCache cache;
  kernels::bank_forward_serial(w.x, w.bank, kMagnitudeEps, cache);
  kernels::BankGrads grads;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::bank_backward_parallel(w.x, w.bank, cache, w.upstream, true, grads);
    else
      kernels::bank_backward_serial(w.x, w.bank, cache, w.upstream, true, grads);
    benchmark::DoNotOptimize(grads.x.data.data());
  }
}

}  // namespace

BENCHMARK(BM_forward<false>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_forward<true>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_backward<false>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_backward<true>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
