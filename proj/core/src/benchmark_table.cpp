#include "zebra/benchmark_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "zebra/error.hpp"

namespace zebra {

std::string_view to_string(BenchmarkCategory category) {
  switch (category) {
    case BenchmarkCategory::knowledge: return "knowledge";
    case BenchmarkCategory::reasoning: return "reasoning";
    case BenchmarkCategory::instruction_following: return "instruction_following";
    case BenchmarkCategory::other: return "other";
  }
  return "other";
}

BenchmarkCategory parse_category(std::string_view text) {
  if (text == "knowledge") return BenchmarkCategory::knowledge;
  if (text == "reasoning") return BenchmarkCategory::reasoning;
  if (text == "instruction_following" || text == "instruction-following") {
    return BenchmarkCategory::instruction_following;
  }
  if (text == "other" || text.empty()) return BenchmarkCategory::other;
  throw ConfigError("unknown benchmark category '" + std::string(text) + "'");
}

BenchmarkTable::BenchmarkTable(std::vector<std::string> models,
                               std::vector<Benchmark> benchmarks,
                               std::vector<std::vector<Score>> scores,
                               std::vector<std::string> notes)
    : models_(std::move(models)),
      benchmarks_(std::move(benchmarks)),
      scores_(std::move(scores)),
      notes_(std::move(notes)) {
  if (models_.empty()) throw SchemaError("benchmark table has no model rows");
  if (benchmarks_.empty()) throw SchemaError("benchmark table has no benchmark columns");
  if (scores_.size() != models_.size()) {
    throw SchemaError("score matrix has " + std::to_string(scores_.size()) +
                      " rows for " + std::to_string(models_.size()) + " models");
  }
  if (notes_.empty()) notes_.resize(models_.size());
  if (notes_.size() != models_.size()) {
    throw SchemaError("note list length does not match model count");
  }

  std::set<std::string_view> seen;
  for (const auto& m : models_) {
    if (m.empty()) throw SchemaError("empty model identifier");
    if (!seen.insert(m).second) throw SchemaError("duplicate model '" + m + "'");
  }
  seen.clear();
  for (const auto& b : benchmarks_) {
    if (b.name.empty()) throw SchemaError("empty benchmark identifier");
    if (!seen.insert(b.name).second) {
      throw SchemaError("duplicate benchmark '" + b.name + "'");
    }
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    const auto& row = scores_[i];
    if (row.size() != benchmarks_.size()) {
      throw SchemaError("row for model '" + models_[i] + "' has " +
                        std::to_string(row.size()) + " scores, expected " +
                        std::to_string(benchmarks_.size()));
    }
    if (std::none_of(row.begin(), row.end(), [](const Score& s) { return s.has_value(); })) {
      throw SchemaError("model '" + models_[i] + "' has no scores");
    }
  }
}

std::optional<std::size_t> BenchmarkTable::find_model(std::string_view name) const {
  auto it = std::find(models_.begin(), models_.end(), name);
  if (it == models_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - models_.begin());
}

std::optional<std::size_t> BenchmarkTable::find_benchmark(std::string_view name) const {
  auto it = std::find_if(benchmarks_.begin(), benchmarks_.end(),
                         [&](const Benchmark& b) { return b.name == name; });
  if (it == benchmarks_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - benchmarks_.begin());
}

BenchmarkTable BenchmarkTable::without_models(
    const std::vector<std::string>& excluded) const {
  std::vector<std::string> models;
  std::vector<std::vector<Score>> scores;
  std::vector<std::string> notes;
  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), models_[i]) != excluded.end()) continue;
    models.push_back(models_[i]);
    scores.push_back(scores_[i]);
    notes.push_back(notes_[i]);
  }
  return BenchmarkTable(std::move(models), benchmarks_, std::move(scores), std::move(notes));
}

BenchmarkTable BenchmarkTable::complete_rows_only() const {
  std::vector<std::string> incomplete;
  for (std::size_t i = 0; i < models_.size(); ++i) {
    const auto& row = scores_[i];
    if (std::any_of(row.begin(), row.end(), [](const Score& s) { return !s; })) {
      incomplete.push_back(models_[i]);
    }
  }
  return without_models(incomplete);
}

void BenchmarkTable::set_categories(
    const std::map<std::string, BenchmarkCategory>& categories) {
  for (const auto& [name, category] : categories) {
    auto idx = find_benchmark(name);
    if (!idx) throw LookupError("category map names unknown benchmark '" + name + "'");
    benchmarks_[*idx].category = category;
  }
}

TableFormat table_format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? TableFormat::json : TableFormat::csv;
}

namespace {

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

// RFC 4180 records: quoted cells may hold commas, doubled quotes and newlines.
std::vector<CsvRecord> read_csv_records(std::istream& in) {
  std::vector<CsvRecord> records;
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);

  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    CsvRecord rec;
    rec.line = line;
    std::string cell;
    bool quoted = false;
    bool end_of_record = false;
    while (i < text.size() && !end_of_record) {
      char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            cell += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          cell += c;
        }
        ++i;
        continue;
      }
      switch (c) {
        case '"': quoted = true; break;
        case ',':
          rec.cells.push_back(std::move(cell));
          cell.clear();
          break;
        case '\r': break;
        case '\n':
          ++line;
          end_of_record = true;
          break;
        default: cell += c;
      }
      ++i;
    }
    if (quoted) throw ParseError("unterminated quoted cell", rec.line);
    rec.cells.push_back(std::move(cell));
    bool blank = rec.cells.size() == 1 && rec.cells[0].find_first_not_of(" \t") == std::string::npos;
    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

Score parse_score(const std::string& raw, std::size_t line, std::size_t column) {
  std::string cell = trim(raw);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = cell.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    throw ParseError("non-numeric score '" + cell + "'", line, column);
  }
  return value;
}

constexpr std::string_view kCategoryTag = "#category:";

}  // namespace

BenchmarkTable parse_benchmark_csv(std::istream& in) {
  auto records = read_csv_records(in);
  if (records.empty()) throw SchemaError("benchmark CSV is empty");

  const auto& header = records.front();
  if (trim(header.cells[0]) != "model") {
    throw SchemaError("first header cell must be 'model', found '" + header.cells[0] + "'");
  }
  std::vector<Benchmark> benchmarks;
  for (std::size_t c = 1; c < header.cells.size(); ++c) {
    benchmarks.push_back({trim(header.cells[c]), BenchmarkCategory::other});
  }

  std::size_t first_row = 1;
  if (records.size() > 1) {
    std::string lead = trim(records[1].cells[0]);
    if (lead.rfind(kCategoryTag, 0) == 0) {
      const auto& cats = records[1];
      if (cats.cells.size() != header.cells.size()) {
        throw ParseError("category line has " + std::to_string(cats.cells.size()) +
                             " cells, header has " + std::to_string(header.cells.size()),
                         cats.line);
      }
      for (std::size_t c = 1; c < cats.cells.size(); ++c) {
        try {
          benchmarks[c - 1].category = parse_category(trim(cats.cells[c]));
        } catch (const ConfigError&) {
          throw ParseError("unknown category '" + trim(cats.cells[c]) + "'", cats.line, c + 1);
        }
      }
      first_row = 2;
    }
  }

  std::vector<std::string> models;
  std::vector<std::vector<Score>> scores;
  for (std::size_t r = first_row; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.cells.size() != header.cells.size()) {
      throw ParseError("expected " + std::to_string(header.cells.size()) + " cells, found " +
                           std::to_string(rec.cells.size()),
                       rec.line);
    }
    models.push_back(trim(rec.cells[0]));
    std::vector<Score> row;
    row.reserve(benchmarks.size());
    for (std::size_t c = 1; c < rec.cells.size(); ++c) {
      row.push_back(parse_score(rec.cells[c], rec.line, c + 1));
    }
    scores.push_back(std::move(row));
  }
  if (models.empty()) throw SchemaError("benchmark CSV has no model rows");
  return BenchmarkTable(std::move(models), std::move(benchmarks), std::move(scores));
}

namespace {

BenchmarkTable benchmark_table_from_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  if (!doc.is_object() || !doc.contains("benchmarks") || !doc.contains("models")) {
    throw SchemaError("benchmark JSON needs 'benchmarks' and 'models' members");
  }
  std::vector<Benchmark> benchmarks;
  for (const auto& b : doc.at("benchmarks")) {
    if (b.is_string()) {
      benchmarks.push_back({b.get<std::string>(), BenchmarkCategory::other});
    } else if (b.is_object() && b.contains("name")) {
      Benchmark bench{b.at("name").get<std::string>(), BenchmarkCategory::other};
      if (b.contains("category")) bench.category = parse_category(b.at("category").get<std::string>());
      benchmarks.push_back(std::move(bench));
    } else {
      throw SchemaError("benchmark entries must be names or {name, category} objects");
    }
  }
  std::vector<std::string> models;
  std::vector<std::vector<Score>> scores;
  std::vector<std::string> notes;
  std::size_t row_index = 0;
  for (const auto& m : doc.at("models")) {
    ++row_index;
    if (!m.is_object() || !m.contains("model") || !m.contains("scores")) {
      throw SchemaError("model entry " + std::to_string(row_index) + " needs 'model' and 'scores'");
    }
    models.push_back(m.at("model").get<std::string>());
    notes.push_back(m.value("note", std::string{}));
    std::vector<Score> row;
    std::size_t col = 0;
    for (const auto& cell : m.at("scores")) {
      ++col;
      if (cell.is_null()) {
        row.push_back(std::nullopt);
      } else if (cell.is_number()) {
        row.push_back(cell.get<double>());
      } else {
        throw ParseError("non-numeric score for model '" + models.back() + "'", row_index, col);
      }
    }
    scores.push_back(std::move(row));
  }
  if (models.empty()) throw SchemaError("benchmark JSON has no model rows");
  return BenchmarkTable(std::move(models), std::move(benchmarks), std::move(scores),
                        std::move(notes));
}

}  // namespace

BenchmarkTable parse_benchmark_json(std::istream& in) {
  try {
    return benchmark_table_from_json(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed benchmark JSON: ") + e.what());
  }
}

BenchmarkTable load_benchmark_table(const std::filesystem::path& path, TableFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open benchmark table '" + path.string() + "'");
  return format == TableFormat::json ? parse_benchmark_json(in) : parse_benchmark_csv(in);
}

BenchmarkTable load_benchmark_table(const std::filesystem::path& path) {
  return load_benchmark_table(path, table_format_for(path));
}

std::map<std::string, BenchmarkCategory> load_category_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open category map '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  if (!doc.is_object()) throw SchemaError("category map must be a JSON object");
  std::map<std::string, BenchmarkCategory> out;
  for (const auto& [name, value] : doc.items()) {
    out.emplace(name, parse_category(value.get<std::string>()));
  }
  return out;
}

}  // namespace zebra
