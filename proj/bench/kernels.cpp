#include <benchmark/benchmark.h>

#include <random>

#include "hwd/nn.hpp"
#include "hwd/nn_reference.hpp"
#include "hwd/parallel.hpp"

namespace {

using hwd::Tensor;

Tensor random_tensor(std::vector<int> shape, unsigned seed) {
  Tensor t(std::move(shape));
  std::mt19937 g(seed);
  std::normal_distribution<float> n(0.0f, 1.0f);
  for (float& v : t.values()) v = n(g);
  return t;
}

// args: channels in, channels out, width (height fixed at 32)
void conv_args(benchmark::internal::Benchmark* b) {
  b->Args({1, 16, 128})->Args({16, 32, 64})->Args({64, 64, 128});
}

void BM_ConvForwardOmp(benchmark::State& state) {
  const int cin = static_cast<int>(state.range(0)), cout = static_cast<int>(state.range(1)), w = static_cast<int>(state.range(2));
  const Tensor in = random_tensor({cin, 32, w}, 1), wt = random_tensor({cout, cin, 3, 3}, 2), b = random_tensor({cout}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(hwd::nn::conv2d_forward(in, wt, b));
  state.counters["threads"] = hwd::max_threads();
}

void BM_ConvForwardReference(benchmark::State& state) {
  const int cin = static_cast<int>(state.range(0)), cout = static_cast<int>(state.range(1)), w = static_cast<int>(state.range(2));
  const Tensor in = random_tensor({cin, 32, w}, 1), wt = random_tensor({cout, cin, 3, 3}, 2), b = random_tensor({cout}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(hwd::nn::reference::conv2d_forward(in, wt, b));
}

void BM_ConvBackwardOmp(benchmark::State& state) {
  const int cin = static_cast<int>(state.range(0)), cout = static_cast<int>(state.range(1)), w = static_cast<int>(state.range(2));
  const Tensor in = random_tensor({cin, 32, w}, 1), wt = random_tensor({cout, cin, 3, 3}, 2), up = random_tensor({cout, 32, w}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(hwd::nn::conv2d_backward(in, wt, up));
  state.counters["threads"] = hwd::max_threads();
}

void BM_ConvBackwardReference(benchmark::State& state) {
  const int cin = static_cast<int>(state.range(0)), cout = static_cast<int>(state.range(1)), w = static_cast<int>(state.range(2));
  const Tensor in = random_tensor({cin, 32, w}, 1), wt = random_tensor({cout, cin, 3, 3}, 2), up = random_tensor({cout, 32, w}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(hwd::nn::reference::conv2d_backward(in, wt, up));
}

void BM_PoolOmp(benchmark::State& state) {
  const Tensor in = random_tensor({static_cast<int>(state.range(0)), 32, 256}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(hwd::nn::maxpool2_forward(in));
  state.counters["threads"] = hwd::max_threads();
}

void BM_PoolReference(benchmark::State& state) {
  const Tensor in = random_tensor({static_cast<int>(state.range(0)), 32, 256}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(hwd::nn::reference::maxpool2_forward(in));
}

}  // namespace

BENCHMARK(BM_ConvForwardOmp)->Apply(conv_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvForwardReference)->Apply(conv_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvBackwardOmp)->Apply(conv_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvBackwardReference)->Apply(conv_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PoolOmp)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PoolReference)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
