#include <benchmark/benchmark.h>

#include <vector>

#include "satact/network.hpp"
#include "satact/rng.hpp"
#include "satact/tensor.hpp"
#include "satact/varprop.hpp"

namespace {

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  satact::Rng rng(1);
  const auto a = satact::sample_normal(rng, 0, 1, n, n);
  const auto b = satact::sample_normal(rng, 0, 1, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(satact::matmul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_ForwardBackward(benchmark::State& state) {
  satact::NetworkConfig cfg;
  cfg.widths = {16, 32, 32, 32, 32, 32, 32, 32, 4};
  cfg.activation = satact::Activation(satact::ActivationKind::PenalizedTanh);
  const satact::Network net = satact::build(cfg);
  satact::Rng rng(2);
  const auto batch = satact::sample_normal(rng, 0, 1, 16, static_cast<std::size_t>(state.range(0)));
  std::vector<std::size_t> labels(batch.cols());
  for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = j % 4;
  for (auto _ : state) {
    const auto tape = satact::forward(net, batch);
    const auto loss = satact::softmax_cross_entropy(tape.logits(), labels);
    benchmark::DoNotOptimize(satact::backward(net, tape, loss.dlogits));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(256);

void BM_Lemma1Empirical(benchmark::State& state) {
  const std::vector<double> mean(8, 0.5);
  for (auto _ : state) {
    satact::Rng rng(3);
    benchmark::DoNotOptimize(satact::lemma1_empirical(rng, 1.0, 8, 4, 0.5, mean, 10000));
  }
}
BENCHMARK(BM_Lemma1Empirical);

void BM_EmpiricalProfile(benchmark::State& state) {
  const std::vector<std::size_t> widths(11, 64);
  const satact::Activation act(satact::ActivationKind::Tanh);
  for (auto _ : state) {
    satact::Rng rng(4);
    benchmark::DoNotOptimize(satact::empirical_profile(rng, widths, act, {}, 1.0, {100, 10, false}));
  }
}
BENCHMARK(BM_EmpiricalProfile);

}  // namespace
BENCHMARK_MAIN();
