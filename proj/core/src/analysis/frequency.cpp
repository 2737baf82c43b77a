#include "zebra/analysis/frequency.hpp"

namespace zebra::analysis {

FrequencyTable frequency_report(const std::vector<PreferencePair>& pairs,
                                const std::vector<std::string>& known_models) {
  FrequencyTable table;
  for (const auto& m : known_models) table[m];
  for (const auto& p : pairs) {
    ++table[p.chosen.model].chosen;
    ++table[p.rejected.model].rejected;
  }
  return table;
}

ordered_json to_json(const FrequencyTable& table) {
  ordered_json doc = ordered_json::object();
  for (const auto& [model, f] : table) {
    ordered_json entry = ordered_json::object();
    entry["chosen"] = f.chosen;
    entry["rejected"] = f.rejected;
    doc[model] = std::move(entry);
  }
  return doc;
}

}  // namespace zebra::analysis
