#include "zebra/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "zebra/error.hpp"

namespace zebra {

std::vector<AbilityProfile> normalize(const BenchmarkTable& input, const NormalizeOptions& options) {
  const BenchmarkTable table =
      options.missing == MissingPolicy::exclude ? input.complete_rows_only() : input;
  const std::size_t n = table.model_count();
  const std::size_t m = table.benchmark_count();

  std::vector<AbilityProfile> profiles(n);
  for (std::size_t i = 0; i < n; ++i) {
    profiles[i].model = table.models()[i];
    profiles[i].note = table.note(i);
    profiles[i].vector.assign(m, 0.0);
  }

  for (std::size_t b = 0; b < m; ++b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t present = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (const auto& s = table.at(i, b)) {
        lo = std::min(lo, *s);
        hi = std::max(hi, *s);
        ++present;
      }
    }
    if (present == 0) {
      throw NormalizationError("benchmark '" + table.benchmarks()[b].name +
                               "' has no scores to normalize");
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (const auto& s = table.at(i, b)) {
        double v = hi == lo ? 0.5 : (*s - lo) / (hi - lo);
        profiles[i].vector[b] = v;
        sum += v;
      }
    }
    const double column_mean = sum / static_cast<double>(present);
    for (std::size_t i = 0; i < n; ++i) {
      if (!table.at(i, b)) {
        profiles[i].vector[b] = column_mean;
        profiles[i].imputed = true;
      }
    }
  }

  for (auto& p : profiles) {
    double sum = 0.0;
    for (double v : p.vector) sum += v;
    p.mb_sup = sum / static_cast<double>(m);
  }
  return profiles;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("cosine over vectors of length " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  // sqrt(aa * bb) rather than sqrt(aa) * sqrt(bb): for a == b it is exactly aa.
  return std::clamp(dot / std::sqrt(aa * bb), -1.0, 1.0);
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> models, std::vector<double> row_major)
    : models_(std::move(models)), values_(std::move(row_major)) {
  if (values_.size() != models_.size() * models_.size()) {
    throw DimensionError("similarity matrix needs " +
                         std::to_string(models_.size() * models_.size()) + " entries, got " +
                         std::to_string(values_.size()));
  }
}

SimilarityMatrix similarity_matrix(const std::vector<AbilityProfile>& profiles) {
  if (profiles.empty()) throw DimensionError("similarity matrix over zero profiles");
  const std::size_t n = profiles.size();
  const std::size_t m = profiles.front().vector.size();
  std::vector<std::string> models;
  std::vector<std::string> zero_models;
  for (const auto& p : profiles) {
    if (p.vector.size() != m) {
      throw DimensionError("profile '" + p.model + "' has " + std::to_string(p.vector.size()) +
                           " entries, expected " + std::to_string(m));
    }
    models.push_back(p.model);
    if (std::all_of(p.vector.begin(), p.vector.end(), [](double v) { return v == 0.0; })) {
      zero_models.push_back(p.model);
    }
  }

  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = cosine_similarity(profiles[i].vector, profiles[j].vector);
      values[i * n + j] = s;
      values[j * n + i] = s;
    }
  }
  SimilarityMatrix sim(std::move(models), std::move(values));
  sim.set_zero_vector_models(std::move(zero_models));
  return sim;
}

ProfileSet build_profile_set(const BenchmarkTable& table, const NormalizeOptions& options) {
  ProfileSet set;
  set.benchmarks = table.benchmarks();
  set.profiles = normalize(table, options);
  set.similarity = similarity_matrix(set.profiles);
  return set;
}

ordered_json to_json(const ProfileSet& set) {
  ordered_json doc = ordered_json::object();
  ordered_json names = ordered_json::array();
  ordered_json categories = ordered_json::array();
  for (const auto& b : set.benchmarks) {
    names.push_back(b.name);
    categories.push_back(std::string(to_string(b.category)));
  }
  doc["benchmarks"] = std::move(names);
  doc["categories"] = std::move(categories);

  ordered_json models = ordered_json::array();
  for (const auto& p : set.profiles) {
    ordered_json entry = ordered_json::object();
    entry["model"] = p.model;
    entry["vector"] = p.vector;
    entry["mb_sup"] = p.mb_sup;
    entry["imputed"] = p.imputed;
    if (!p.note.empty()) entry["note"] = p.note;
    models.push_back(std::move(entry));
  }
  doc["models"] = std::move(models);

  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < set.similarity.size(); ++i) {
    auto r = set.similarity.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["similarity"] = std::move(rows);
  return doc;
}

ProfileSet profile_set_from_json(const nlohmann::json& doc) {
  try {
    ProfileSet set;
    const auto& names = doc.at("benchmarks");
    for (std::size_t b = 0; b < names.size(); ++b) {
      Benchmark bench{names[b].get<std::string>(), BenchmarkCategory::other};
      if (doc.contains("categories")) {
        bench.category = parse_category(doc.at("categories").at(b).get<std::string>());
      }
      set.benchmarks.push_back(std::move(bench));
    }
    std::vector<std::string> models;
    for (const auto& entry : doc.at("models")) {
      AbilityProfile p;
      p.model = entry.at("model").get<std::string>();
      p.vector = entry.at("vector").get<std::vector<double>>();
      p.mb_sup = entry.at("mb_sup").get<double>();
      p.imputed = entry.value("imputed", false);
      p.note = entry.value("note", std::string{});
      if (p.vector.size() != set.benchmarks.size()) {
        throw DimensionError("profile '" + p.model + "' length does not match benchmarks");
      }
      models.push_back(p.model);
      set.profiles.push_back(std::move(p));
    }
    std::vector<double> values;
    const auto& rows = doc.at("similarity");
    if (rows.size() != models.size()) throw DimensionError("similarity row count mismatch");
    for (const auto& row : rows) {
      if (row.size() != models.size()) throw DimensionError("similarity column count mismatch");
      for (const auto& v : row) values.push_back(v.get<double>());
    }
    set.similarity = SimilarityMatrix(std::move(models), std::move(values));
    std::vector<std::string> zero_models;
    for (const auto& p : set.profiles) {
      if (std::all_of(p.vector.begin(), p.vector.end(), [](double v) { return v == 0.0; })) {
        zero_models.push_back(p.model);
      }
    }
    set.similarity.set_zero_vector_models(std::move(zero_models));
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed profiles JSON: ") + e.what());
  }
}

void save_profile_set(const ProfileSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << dump_pretty(to_json(set)) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ProfileSet load_profile_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open profiles '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  return profile_set_from_json(doc);
}

}  // namespace zebra
