#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "zebra/benchmark_table.hpp"
#include "zebra/json_format.hpp"

namespace zebra {

// Normalized benchmark vector of one model plus its superiority score
// (mean of the vector entries).
struct AbilityProfile {
  std::string model;
  std::vector<double> vector;  // one entry per benchmark, each in [0, 1]
  double mb_sup = 0.0;
  bool imputed = false;  // at least one entry filled from a column mean
  std::string note;

  bool operator==(const AbilityProfile&) const = default;
};

enum class MissingPolicy {
  impute,   // fill with the column mean of normalized values
  exclude,  // drop models with any missing score before normalizing
};

struct NormalizeOptions {
  MissingPolicy missing = MissingPolicy::impute;
};

// Column-wise min-max normalization. A column whose max equals its min maps
// to 0.5 everywhere. Throws NormalizationError if a column has no values.
std::vector<AbilityProfile> normalize(const BenchmarkTable& table,
                                      const NormalizeOptions& options = {});

// Cosine of the angle between a and b, clamped to [-1, 1]. Returns 0 when
// either vector is all zeros. Throws DimensionError on length mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Dense symmetric matrix of pairwise behavior similarity.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<std::string> models, std::vector<double> row_major);

  const std::vector<std::string>& models() const { return models_; }
  std::size_t size() const { return models_.size(); }

  double at(std::size_t i, std::size_t j) const { return values_[i * models_.size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * models_.size(), models_.size()};
  }
  const std::vector<double>& values() const { return values_; }

  // Models whose ability vector is all zeros; their rows are 0 off the diagonal.
  const std::vector<std::string>& zero_vector_models() const { return zero_models_; }
  void set_zero_vector_models(std::vector<std::string> models) { zero_models_ = std::move(models); }

 private:
  std::vector<std::string> models_;
  std::vector<double> values_;
  std::vector<std::string> zero_models_;
};

// Cosine over every unordered pair, computed once and mirrored, so the
// result is bitwise symmetric. The diagonal is 1 for every profile.
// Throws DimensionError when vectors differ in length or the list is empty.
SimilarityMatrix similarity_matrix(const std::vector<AbilityProfile>& profiles);

// Everything the profile stage produces; the on-disk profiles.json.
struct ProfileSet {
  std::vector<Benchmark> benchmarks;
  std::vector<AbilityProfile> profiles;
  SimilarityMatrix similarity;
};

ProfileSet build_profile_set(const BenchmarkTable& table, const NormalizeOptions& options = {});

// {"benchmarks": [...], "categories": [...],
//  "models": [{"model", "vector", "mb_sup", "imputed", "note"?}],
//  "similarity": [[...], ...]}
ordered_json to_json(const ProfileSet& set);
ProfileSet profile_set_from_json(const nlohmann::json& doc);

void save_profile_set(const ProfileSet& set, const std::filesystem::path& path);
ProfileSet load_profile_set(const std::filesystem::path& path);

}  // namespace zebra
