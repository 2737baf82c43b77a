#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "zebra/benchmark_table.hpp"
#include "zebra/json_format.hpp"
#include "zebra/profile.hpp"

namespace zebra::analysis {

enum class Linkage { single, complete, average };

std::string_view to_string(Linkage linkage);
Linkage parse_linkage(std::string_view text);

// One agglomeration step. Leaves are 0..n-1; the cluster formed by step k
// gets id n+k. a < b always.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
  std::size_t size = 0;

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::vector<std::string> models;
  std::vector<std::string> benchmarks;  // columns that survived the filter
  Linkage linkage = Linkage::average;
  std::vector<Merge> merges;
  double cut = 0.4;
  // Per model, cluster id after applying every merge with distance <= cut.
  // Ids are numbered 0.. in order of first appearance.
  std::vector<std::size_t> clusters;
};

struct ClusterOptions {
  std::vector<BenchmarkCategory> categories;  // empty keeps every column
  double cut = 0.4;
  Linkage linkage = Linkage::average;
};

// Pairwise cosine distance (1 - similarity) over the given vectors.
// Row-major n x n.
std::vector<double> cosine_distances(const std::vector<std::vector<double>>& vectors);

// Agglomerative clustering on cosine distance restricted to the benchmarks
// whose category passes the filter. Ties between equal distances go to the
// lexicographically smallest (a, b) cluster-id pair.
// Throws ConfigError if the filter keeps no column, DimensionError for
// fewer than 2 profiles.
Dendrogram cluster(const std::vector<AbilityProfile>& profiles,
                   const std::vector<Benchmark>& benchmarks, const ClusterOptions& options = {});

// Same algorithm over an explicit distance matrix (row-major, n x n).
std::vector<Merge> agglomerate(std::vector<double> distances, std::size_t n, Linkage linkage);

// Flat cluster ids after applying merges with distance <= cut.
std::vector<std::size_t> cut_tree(const std::vector<Merge>& merges, std::size_t n, double cut);

// {"models", "benchmarks", "linkage", "merges": [{a, b, distance, size}],
//  "cut", "clusters": {model: id}}
ordered_json to_json(const Dendrogram& dendrogram);

}  // namespace zebra::analysis
