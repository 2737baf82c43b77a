#include <benchmark/benchmark.h>

#include <random>

#include "zebra/selection.hpp"

namespace {

struct Fixture {
  std::vector<zebra::AbilityProfile> profiles;
  std::vector<zebra::InstructionRecord> pool;

  Fixture(std::size_t models, std::size_t instructions) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < models; ++i) {
      zebra::AbilityProfile p;
      p.model = "m" + std::to_string(i);
      double sum = 0.0;
      for (int k = 0; k < 6; ++k) {
        p.vector.push_back(unit(rng));
        sum += p.vector.back();
      }
      p.mb_sup = sum / 6.0;
      names.push_back(p.model);
      profiles.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < instructions; ++i) {
      std::shuffle(names.begin(), names.end(), rng);
      zebra::InstructionRecord rec{std::to_string(i), "q", {}};
      for (std::size_t k = 0; k < 4; ++k) rec.responses.push_back({names[k], "response text"});
      pool.push_back(std::move(rec));
    }
  }

  zebra::BehaviorIndex index() const { return {profiles, zebra::similarity_matrix(profiles)}; }
};

void BM_Binarize(benchmark::State& state) {
  Fixture f(16, 64000);
  auto index = f.index();
  zebra::StrategyConfig cfg;
  cfg.strategy = static_cast<zebra::Strategy>(state.range(0));
  zebra::BinarizeOptions opts;
  opts.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    zebra::SelectionReport report;
    benchmark::DoNotOptimize(zebra::binarize_pool(f.pool, index, cfg, report, opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.pool.size()));
}
BENCHMARK(BM_Binarize)->Args({0, 1})->Args({2, 1})->Args({2, 4})->Unit(benchmark::kMillisecond);

}  // namespace
