#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zebra {

enum class BenchmarkCategory { knowledge, reasoning, instruction_following, other };

std::string_view to_string(BenchmarkCategory category);
// Accepts the canonical names plus "instruction-following"; throws ConfigError.
BenchmarkCategory parse_category(std::string_view text);

struct Benchmark {
  std::string name;
  BenchmarkCategory category = BenchmarkCategory::other;
};

// A raw score cell; std::nullopt marks a missing value.
using Score = std::optional<double>;

// Model x benchmark matrix of raw scores. Scales may differ between
// columns (percentages next to fractions is normal).
class BenchmarkTable {
 public:
  BenchmarkTable() = default;

  // Validates uniqueness, shape and the one-score-per-row rule.
  // Throws SchemaError.
  BenchmarkTable(std::vector<std::string> models,
                 std::vector<Benchmark> benchmarks,
                 std::vector<std::vector<Score>> scores,
                 std::vector<std::string> notes = {});

  const std::vector<std::string>& models() const { return models_; }
  const std::vector<Benchmark>& benchmarks() const { return benchmarks_; }
  const std::vector<std::vector<Score>>& scores() const { return scores_; }

  // Free-form per-model annotation (e.g. "scores substituted from X").
  // Empty string when absent.
  const std::string& note(std::size_t model) const { return notes_[model]; }

  std::size_t model_count() const { return models_.size(); }
  std::size_t benchmark_count() const { return benchmarks_.size(); }

  const Score& at(std::size_t model, std::size_t benchmark) const {
    return scores_[model][benchmark];
  }

  std::optional<std::size_t> find_model(std::string_view name) const;
  std::optional<std::size_t> find_benchmark(std::string_view name) const;

  // Copy without the named models. Unknown names are ignored.
  BenchmarkTable without_models(const std::vector<std::string>& excluded) const;

  // Copy without rows that have any missing cell.
  BenchmarkTable complete_rows_only() const;

  // Overrides categories by benchmark name; throws LookupError on names
  // that are not columns of the table.
  void set_categories(const std::map<std::string, BenchmarkCategory>& categories);

 private:
  std::vector<std::string> models_;
  std::vector<Benchmark> benchmarks_;
  std::vector<std::vector<Score>> scores_;
  std::vector<std::string> notes_;
};

enum class TableFormat { csv, json };

// Guesses from the file extension; ".json" is JSON, everything else CSV.
TableFormat table_format_for(const std::filesystem::path& path);

// CSV layout: header `model,<bench>,...`; optional second line whose first
// cell starts with `#category:` and whose remaining cells hold one category
// per benchmark column; then one row per model. Empty cells are missing.
BenchmarkTable parse_benchmark_csv(std::istream& in);

// JSON layout:
//   {"benchmarks": [{"name": ..., "category": ...} | "name", ...],
//    "models": [{"model": ..., "scores": [number|null, ...], "note": ...}]}
BenchmarkTable parse_benchmark_json(std::istream& in);

// Throws IoError when the file cannot be opened.
BenchmarkTable load_benchmark_table(const std::filesystem::path& path,
                                    TableFormat format);
BenchmarkTable load_benchmark_table(const std::filesystem::path& path);

// Sidecar category map: JSON object {"<benchmark>": "<category>", ...}.
std::map<std::string, BenchmarkCategory> load_category_map(
    const std::filesystem::path& path);

}  // namespace zebra
