#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zebra/json_format.hpp"

namespace zebra::stats {

struct CostRow {
  std::string method;
  std::int64_t pairs = 0;
  double unit_cost = 0.0;  // USD per pair
  double total = 0.0;      // pairs * unit_cost, rounded to cents
};

// Throws ValidationError for negative pairs or unit cost.
CostRow cost_report(const std::string& method, std::int64_t n_pairs, double unit_cost);

// The zero-annotation row: same pair count, no labeling cost.
CostRow zero_annotation_row(std::int64_t n_pairs);

// {"rows": [{"method", "pairs", "unit_cost", "total"}, ...]}
ordered_json to_json(const std::vector<CostRow>& rows);

}  // namespace zebra::stats
