#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zebra/benchmark_table.hpp"
#include "zebra/profile.hpp"
#include "zebra/records.hpp"

namespace zebra::testing {

inline std::filesystem::path data_dir() { return ZEBRA_DATA_DIR; }
inline std::filesystem::path table5_path() { return data_dir() / "table5.csv"; }

inline BenchmarkTable load_table5() { return load_benchmark_table(table5_path()); }

// Published "Average Score" column, rounded to two decimals.
inline std::map<std::string, double> published_averages() {
  std::map<std::string, double> out;
  std::ifstream in(data_dir() / "table5_average.csv");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return out;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("zebra-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Random profiles over `m` benchmarks. Scores are drawn on a coarse grid so
// exact ties in mb_sup and similarity actually occur.
inline std::vector<AbilityProfile> random_profiles(std::mt19937_64& rng, std::size_t n,
                                                   std::size_t m, int grid = 8) {
  std::uniform_int_distribution<int> cell(0, grid);
  std::vector<AbilityProfile> out;
  for (std::size_t i = 0; i < n; ++i) {
    AbilityProfile p;
    p.model = "m" + std::to_string(i);
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      p.vector.push_back(static_cast<double>(cell(rng)) / grid);
      sum += p.vector.back();
    }
    p.mb_sup = sum / static_cast<double>(m);
    out.push_back(std::move(p));
  }
  return out;
}

// Pool whose instructions each draw a random subset of `models`
// (between min_k and max_k of them).
inline std::vector<InstructionRecord> random_pool(std::mt19937_64& rng,
                                                  const std::vector<std::string>& models,
                                                  std::size_t instructions, std::size_t min_k,
                                                  std::size_t max_k) {
  std::vector<InstructionRecord> pool;
  std::uniform_int_distribution<std::size_t> size_dist(min_k, max_k);
  for (std::size_t i = 0; i < instructions; ++i) {
    std::vector<std::string> shuffled = models;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.resize(std::min(size_dist(rng), shuffled.size()));
    InstructionRecord rec;
    rec.instruction_id = "inst-" + std::to_string(i);
    rec.instruction = "Instruction number " + std::to_string(i);
    for (const auto& m : shuffled) {
      rec.responses.push_back({m, "response of " + m + " to " + std::to_string(i)});
    }
    pool.push_back(std::move(rec));
  }
  return pool;
}

}  // namespace zebra::testing
