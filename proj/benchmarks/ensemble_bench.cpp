#include <benchmark/benchmark.h>

#include "pavesat/ensemble/ensemble.hpp"
#include "pavesat/random.hpp"

using namespace pavesat;
using namespace pavesat::ensemble;

namespace {

std::vector<ModelPrediction> members(int models, int samples) {
  Rng rng(5);
  std::vector<ModelPrediction> out(models);
  for (int m = 0; m < models; ++m) {
    out[m].model_id = "m" + std::to_string(m);
    for (int s = 0; s < samples; ++s) {
      out[m].sample_ids.push_back("s" + std::to_string(s));
      ProbabilityRow row{};
      double sum = 0;
      for (auto& v : row) sum += v = rng.uniform() + 1e-3;
      for (auto& v : row) v /= sum;
      out[m].rows.push_back(row);
    }
  }
  return out;
}

}  // namespace

static void BM_Combine(benchmark::State& state) {
  const auto preds = members(static_cast<int>(state.range(0)), 775);
  EnsembleConfig cfg;
  cfg.mode = state.range(1) ? CombineMode::AccuracyWeighted : CombineMode::Uniform;
  for (std::size_t i = 0; i < preds.size(); ++i) cfg.accuracies.push_back(0.8 + 0.01 * static_cast<double>(i));
  for (auto _ : state) benchmark::DoNotOptimize(combine(preds, cfg));
  state.SetItemsProcessed(state.iterations() * 775);
}
BENCHMARK(BM_Combine)->Args({3, 0})->Args({10, 0})->Args({10, 1})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
