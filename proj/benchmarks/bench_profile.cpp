#include <benchmark/benchmark.h>

#include <random>

#include "zebra/benchmark_table.hpp"
#include "zebra/profile.hpp"

namespace {

zebra::BenchmarkTable random_table(std::size_t models, std::size_t columns) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> score(0.0, 100.0);
  std::vector<std::string> names;
  std::vector<zebra::Benchmark> benchmarks;
  std::vector<std::vector<zebra::Score>> scores(models);
  for (std::size_t i = 0; i < models; ++i) {
    names.push_back("model-" + std::to_string(i));
    for (std::size_t b = 0; b < columns; ++b) scores[i].push_back(score(rng));
  }
  for (std::size_t b = 0; b < columns; ++b) benchmarks.push_back({"bench-" + std::to_string(b)});
  return {names, benchmarks, scores};
}

void BM_BuildProfileSet(benchmark::State& state) {
  auto table = random_table(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(zebra::build_profile_set(table));
}
BENCHMARK(BM_BuildProfileSet)->Arg(16)->Arg(128)->Arg(512);

}  // namespace
