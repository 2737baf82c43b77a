#include <benchmark/benchmark.h>

#include <random>

#include "zebra/analysis/tfidf.hpp"
#include "zebra/stats.hpp"

namespace {

void BM_TfidfAudit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> word(0, 499);
  auto text = [&] {
    std::string s;
    for (int k = 0; k < 80; ++k) s += "w" + std::to_string(word(rng)) + " ";
    return s;
  };
  std::vector<zebra::InstructionRecord> pool;
  for (int i = 0; i < state.range(0); ++i) {
    pool.push_back({std::to_string(i), "q", {{"a", text()}, {"b", text()}, {"c", text()}}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(zebra::analysis::tfidf_audit(pool, "a", "b"));
}
BENCHMARK(BM_TfidfAudit)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Permutation(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  zebra::stats::PairedSample s;
  for (int i = 0; i < 500; ++i) {
    s.a.push_back(noise(rng));
    s.b.push_back(noise(rng));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        zebra::stats::permutation_test(s, 10000, 1, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_Permutation)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
