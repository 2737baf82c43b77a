#pragma once

#include <string>
#include <vector>

#include "zebra/json_format.hpp"
#include "zebra/records.hpp"
#include "zebra/selection.hpp"

namespace zebra::analysis {

// Counts how often each model is chosen and rejected. Models listed in
// `known_models` appear with zero counts even if never selected.
FrequencyTable frequency_report(const std::vector<PreferencePair>& pairs,
                                const std::vector<std::string>& known_models = {});

// {"<model>": {"chosen": n, "rejected": n}, ...} sorted by model name.
ordered_json to_json(const FrequencyTable& table);

}  // namespace zebra::analysis
