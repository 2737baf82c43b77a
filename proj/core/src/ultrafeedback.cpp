#include <set>

#include "zebra/dataset_io.hpp"
#include "zebra/error.hpp"

namespace zebra {

namespace {

std::string id_for(const nlohmann::json& row, std::size_t index) {
  for (const char* key : {"instruction_id", "prompt_id", "id"}) {
    auto it = row.find(key);
    if (it == row.end()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
  }
  return "uf-" + std::to_string(index);
}

}  // namespace

ConversionStats convert_ultrafeedback(std::istream& in, std::ostream& out) {
  ConversionStats stats;
  std::set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json row;
    try {
      row = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), line);
    }
    const std::size_t index = stats.rows++;
    if (!row.is_object() || !row.contains("instruction") || !row["instruction"].is_string()) {
      throw ValidationError("line " + std::to_string(line) + ": missing string 'instruction'");
    }

    InstructionRecord rec;
    rec.instruction_id = id_for(row, index);
    rec.instruction = row["instruction"].get<std::string>();
    if (!ids.insert(rec.instruction_id).second) {
      throw ValidationError("line " + std::to_string(line) + ": duplicate instruction id '" +
                            rec.instruction_id + "'");
    }

    std::set<std::string> models;
    if (auto it = row.find("completions"); it != row.end() && it->is_array()) {
      for (const auto& c : *it) {
        if (!c.is_object()) continue;
        auto m = c.find("model");
        auto r = c.find("response");
        if (m == c.end() || r == c.end() || !m->is_string() || !r->is_string()) continue;
        std::string model = m->get<std::string>();
        if (model.empty()) continue;
        if (!models.insert(model).second) {
          ++stats.dropped_duplicates;
          continue;
        }
        rec.responses.push_back({std::move(model), r->get<std::string>()});
      }
    }
    if (rec.responses.empty()) {
      ++stats.skipped_empty;
      continue;
    }
    out << dump_canonical(to_json(rec)) << '\n';
    ++stats.records;
  }
  if (!out) throw IoError("write failed during UltraFeedback conversion");
  return stats;
}

}  // namespace zebra
