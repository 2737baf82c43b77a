#include "zebra/cost.hpp"

#include <cmath>

#include "zebra/error.hpp"

namespace zebra::stats {

CostRow cost_report(const std::string& method, std::int64_t n_pairs, double unit_cost) {
  if (n_pairs < 0) throw ValidationError("pair count must be non-negative");
  if (!(unit_cost >= 0.0) || !std::isfinite(unit_cost)) {
    throw ValidationError("unit cost must be a non-negative number");
  }
  double total = static_cast<double>(n_pairs) * unit_cost;
  return {method, n_pairs, unit_cost, std::round(total * 100.0) / 100.0};
}

CostRow zero_annotation_row(std::int64_t n_pairs) {
  return cost_report("zero-annotation (benchmark profiles)", n_pairs, 0.0);
}

ordered_json to_json(const std::vector<CostRow>& rows) {
  ordered_json list = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json entry = ordered_json::object();
    entry["method"] = r.method;
    entry["pairs"] = r.pairs;
    entry["unit_cost"] = r.unit_cost;
    entry["total"] = r.total;
    list.push_back(std::move(entry));
  }
  ordered_json doc = ordered_json::object();
  doc["rows"] = std::move(list);
  return doc;
}

}  // namespace zebra::stats
