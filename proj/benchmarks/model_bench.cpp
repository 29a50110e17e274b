#include <benchmark/benchmark.h>

#include "pavesat/model/network.hpp"
#include "pavesat/model/train.hpp"
#include "pavesat/pipeline/config.hpp"
#include "pavesat/random.hpp"

using namespace pavesat;
using namespace pavesat::model;

namespace {

CompactNetConfig sized(int side) {
  auto c = pipeline::default_network();
  c.input_channels = 3;
  c.input_height = side;
  c.input_width = side;
  return c;
}

Tensor<float> noise(int batch, const CompactNetConfig& c) {
  Tensor<float> x({batch, c.input_planes(), c.input_height, c.input_width});
  Rng rng(1);
  for (auto& v : x.values) v = static_cast<float>(rng.uniform());
  return x;
}

}  // namespace

static void BM_Forward(benchmark::State& state) {
  const auto cfg = sized(static_cast<int>(state.range(0)));
  const Network<float> net(cfg, 1);
  const auto x = noise(8, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_Forward)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_TrainStep(benchmark::State& state) {
  const auto cfg = sized(static_cast<int>(state.range(0)));
  Network<float> net(cfg, 1);
  const auto x = noise(8, cfg);
  const std::vector<int> labels = {0, 1, 2, 3, 4, 0, 1, 2};
  Adam adam(1e-3, 0.9, 0.999, 1e-7);
  for (auto _ : state) {
    ForwardCache<float> cache;
    net.forward(x, cache);
    adam.step(net, net.backward(cache, labels));
  }
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_TrainStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
