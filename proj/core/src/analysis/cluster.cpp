#include "zebra/analysis/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "zebra/error.hpp"

namespace zebra::analysis {

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "average";
}

Linkage parse_linkage(std::string_view text) {
  if (text == "single") return Linkage::single;
  if (text == "complete") return Linkage::complete;
  if (text == "average") return Linkage::average;
  throw ConfigError("unknown linkage '" + std::string(text) + "'");
}

std::vector<double> cosine_distances(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = std::max(0.0, 1.0 - cosine_similarity(vectors[i], vectors[j]));
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return d;
}

std::vector<Merge> agglomerate(std::vector<double> dist, std::size_t n, Linkage linkage) {
  if (dist.size() != n * n) throw DimensionError("distance matrix is not n x n");
  // slot -> current cluster id / size; slots of merged clusters go inactive.
  std::vector<std::size_t> id(n), size(n, 1);
  std::vector<bool> active(n, true);
  std::iota(id.begin(), id.end(), std::size_t{0});

  std::vector<Merge> merges;
  merges.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_i = 0, best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_ids{0, 0};
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        double d = dist[i * n + j];
        std::pair<std::size_t, std::size_t> ids = std::minmax(id[i], id[j]);
        if (!found || d < best || (d == best && ids < best_ids)) {
          found = true;
          best = d;
          best_i = i;
          best_j = j;
          best_ids = {ids.first, ids.second};
        }
      }
    }

    const double wi = static_cast<double>(size[best_i]);
    const double wj = static_cast<double>(size[best_j]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == best_i || k == best_j) continue;
      double di = dist[best_i * n + k];
      double dj = dist[best_j * n + k];
      double merged = 0.0;
      switch (linkage) {
        case Linkage::single: merged = std::min(di, dj); break;
        case Linkage::complete: merged = std::max(di, dj); break;
        case Linkage::average: merged = (wi * di + wj * dj) / (wi + wj); break;
      }
      dist[best_i * n + k] = merged;
      dist[k * n + best_i] = merged;
    }

    merges.push_back({best_ids.first, best_ids.second, best, size[best_i] + size[best_j]});
    id[best_i] = n + step;
    size[best_i] += size[best_j];
    active[best_j] = false;
  }
  return merges;
}

std::vector<std::size_t> cut_tree(const std::vector<Merge>& merges, std::size_t n, double cut) {
  // Union-find over leaves plus internal nodes.
  std::vector<std::size_t> parent(n + merges.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < merges.size(); ++k) {
    if (merges[k].distance > cut) continue;
    parent[root(merges[k].a)] = n + k;
    parent[root(merges[k].b)] = n + k;
  }
  std::vector<std::size_t> labels(n);
  std::vector<std::size_t> seen_roots;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = root(i);
    auto it = std::find(seen_roots.begin(), seen_roots.end(), r);
    labels[i] = static_cast<std::size_t>(it - seen_roots.begin());
    if (it == seen_roots.end()) seen_roots.push_back(r);
  }
  return labels;
}

Dendrogram cluster(const std::vector<AbilityProfile>& profiles,
                   const std::vector<Benchmark>& benchmarks, const ClusterOptions& options) {
  if (profiles.size() < 2) throw DimensionError("clustering needs at least 2 profiles");

  std::vector<std::size_t> columns;
  Dendrogram out;
  for (std::size_t b = 0; b < benchmarks.size(); ++b) {
    const auto& cats = options.categories;
    if (cats.empty() || std::find(cats.begin(), cats.end(), benchmarks[b].category) != cats.end()) {
      columns.push_back(b);
      out.benchmarks.push_back(benchmarks[b].name);
    }
  }
  if (columns.empty()) throw ConfigError("category filter selects no benchmark columns");

  std::vector<std::vector<double>> vectors;
  for (const auto& p : profiles) {
    if (p.vector.size() != benchmarks.size()) {
      throw DimensionError("profile '" + p.model + "' does not match the benchmark list");
    }
    std::vector<double> v;
    v.reserve(columns.size());
    for (auto c : columns) v.push_back(p.vector[c]);
    vectors.push_back(std::move(v));
    out.models.push_back(p.model);
  }

  out.linkage = options.linkage;
  out.cut = options.cut;
  out.merges = agglomerate(cosine_distances(vectors), profiles.size(), options.linkage);
  out.clusters = cut_tree(out.merges, profiles.size(), options.cut);
  return out;
}

ordered_json to_json(const Dendrogram& dendrogram) {
  ordered_json doc = ordered_json::object();
  doc["models"] = dendrogram.models;
  doc["benchmarks"] = dendrogram.benchmarks;
  doc["linkage"] = std::string(to_string(dendrogram.linkage));
  ordered_json merges = ordered_json::array();
  for (const auto& m : dendrogram.merges) {
    ordered_json entry = ordered_json::object();
    entry["a"] = m.a;
    entry["b"] = m.b;
    entry["distance"] = m.distance;
    entry["size"] = m.size;
    merges.push_back(std::move(entry));
  }
  doc["merges"] = std::move(merges);
  doc["cut"] = dendrogram.cut;
  ordered_json clusters = ordered_json::object();
  for (std::size_t i = 0; i < dendrogram.models.size(); ++i) {
    clusters[dendrogram.models[i]] = dendrogram.clusters[i];
  }
  doc["clusters"] = std::move(clusters);
  return doc;
}

}  // namespace zebra::analysis
