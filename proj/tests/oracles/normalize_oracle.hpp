#pragma once

// Spreadsheet-style recomputation of min-max profiles: one formula per
// cell, long double accumulation, no shared code with the library.

#include <cmath>
#include <optional>
#include <vector>

namespace zebra::oracle {

struct OracleProfile {
  std::vector<long double> vector;
  long double mean = 0;
};

inline std::vector<OracleProfile> minmax_profiles(
    const std::vector<std::vector<std::optional<double>>>& raw) {
  const std::size_t n = raw.size();
  const std::size_t m = raw.empty() ? 0 : raw[0].size();
  std::vector<OracleProfile> out(n, OracleProfile{std::vector<long double>(m, 0), 0});
  for (std::size_t b = 0; b < m; ++b) {
    bool any = false;
    long double lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!raw[i][b]) continue;
      long double v = *raw[i][b];
      if (!any || v < lo) lo = v;
      if (!any || v > hi) hi = v;
      any = true;
    }
    long double total = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!raw[i][b]) continue;
      long double v = hi == lo ? 0.5L : (static_cast<long double>(*raw[i][b]) - lo) / (hi - lo);
      out[i].vector[b] = v;
      total += v;
      ++count;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!raw[i][b]) out[i].vector[b] = total / count;
    }
  }
  for (auto& p : out) {
    long double s = 0;
    for (auto v : p.vector) s += v;
    p.mean = s / m;
  }
  return out;
}

// Plain dot-product cosine in long double; zero vectors give 0.
inline long double brute_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += static_cast<long double>(a[k]) * b[k];
    na += static_cast<long double>(a[k]) * a[k];
    nb += static_cast<long double>(b[k]) * b[k];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace zebra::oracle
