#include "zebra/stats.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>
#include <unordered_map>

#include <boost/math/special_functions/beta.hpp>

#include "zebra/error.hpp"

namespace zebra::stats {

void PairedSample::validate() const {
  if (a.size() != b.size()) {
    throw ValidationError("paired sample has " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()) + " scores");
  }
  if (!ids.empty() && ids.size() != a.size()) {
    throw ValidationError("paired sample id list does not match score count");
  }
  if (a.size() < 2) throw ValidationError("paired sample needs at least 2 observations");
}

std::vector<double> PairedSample::differences() const {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

namespace {

// Two-sided tail P(|T| >= |t|).
double two_sided_p(double t, double dof) {
  if (t == 0.0) return 1.0;
  const double x = dof / (dof + t * t);
  return boost::math::ibeta(dof / 2.0, 0.5, x);
}

}  // namespace

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw ValidationError("degrees of freedom must be positive");
  if (t == 0.0) return 0.5;
  const double tail = 0.5 * two_sided_p(t, dof);
  return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(const PairedSample& sample) {
  sample.validate();
  const auto d = sample.differences();
  const auto n = static_cast<double>(d.size());

  TTestResult out;
  out.n = d.size();
  double sum = 0.0;
  for (double v : d) sum += v;
  out.mean_delta = sum / n;

  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
    out.all_zero = true;
    out.t_stat = 0.0;
    out.p_t = 1.0;
    return out;
  }
  if (std::all_of(d.begin(), d.end(), [&](double v) { return v == d.front(); })) {
    throw ValidationError("differences are constant and nonzero; t statistic is unbounded");
  }

  double ss = 0.0;
  for (double v : d) ss += (v - out.mean_delta) * (v - out.mean_delta);
  const double sd = std::sqrt(ss / (n - 1.0));
  out.t_stat = out.mean_delta / (sd / std::sqrt(n));
  out.p_t = two_sided_p(out.t_stat, n - 1.0);
  return out;
}

namespace {

constexpr std::size_t kBlock = 1024;

std::size_t count_block(const std::vector<double>& d, double observed, double tolerance,
                        std::uint64_t seed, std::size_t block, std::size_t shuffles) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 rng(seq);
  std::size_t count = 0;
  for (std::size_t s = 0; s < shuffles; ++s) {
    double sum = 0.0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i % 64 == 0) bits = rng();
      sum += (bits & 1u) ? -d[i] : d[i];
      bits >>= 1;
    }
    if (std::abs(sum) >= observed - tolerance) ++count;
  }
  return count;
}

}  // namespace

PermutationResult permutation_test(const PairedSample& sample, std::size_t n_shuffles,
                                   std::uint64_t seed, unsigned threads) {
  sample.validate();
  if (n_shuffles < 1) throw ConfigError("permutation test needs at least one shuffle");
  const auto d = sample.differences();

  // Compare sums rather than means; the tolerance absorbs summation-order
  // round-off so exact ties count as ties.
  double observed = 0.0, scale = 0.0;
  for (double v : d) {
    observed += v;
    scale += std::abs(v);
  }
  observed = std::abs(observed);
  const double tolerance = 1e-12 * scale;

  const std::size_t blocks = (n_shuffles + kBlock - 1) / kBlock;
  std::vector<std::size_t> counts(blocks, 0);
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < blocks; k += stride) {
      std::size_t shuffles = std::min(kBlock, n_shuffles - k * kBlock);
      counts[k] = count_block(d, observed, tolerance, seed, k, shuffles);
    }
  };
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }

  PermutationResult out;
  out.n_shuffles = n_shuffles;
  out.seed = seed;
  for (auto c : counts) out.at_least_as_extreme += c;
  out.p_perm = static_cast<double>(out.at_least_as_extreme + 1) / static_cast<double>(n_shuffles + 1);
  return out;
}

ComparisonResult compare(const PairedSample& sample, std::size_t n_shuffles, std::uint64_t seed,
                         unsigned threads) {
  return {paired_t_test(sample), permutation_test(sample, n_shuffles, seed, threads)};
}

ordered_json to_json(const ComparisonResult& result) {
  ordered_json doc = ordered_json::object();
  doc["t"] = result.t_test.t_stat;
  doc["p_t"] = result.t_test.p_t;
  doc["mean_delta"] = result.t_test.mean_delta;
  doc["p_perm"] = result.permutation.p_perm;
  doc["n"] = result.t_test.n;
  doc["n_shuffles"] = result.permutation.n_shuffles;
  doc["seed"] = result.permutation.seed;
  doc["all_zero"] = result.t_test.all_zero;
  return doc;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_number(const std::string& cell, double& value) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

ScoreList load_scores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open score file '" + path.string() + "'");
  ScoreList out;
  std::unordered_map<std::string, std::size_t> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      throw ParseError("expected two cells 'id,score'", line);
    }
    std::string id = trim(std::string_view(text).substr(0, comma));
    std::string cell = trim(std::string_view(text).substr(comma + 1));
    double value = 0.0;
    if (!parse_number(cell, value)) {
      if (out.empty() && seen.empty() && line == 1) continue;  // header
      throw ParseError("non-numeric score '" + cell + "'", line, 2);
    }
    if (id.empty()) throw ParseError("empty id", line, 1);
    if (!seen.emplace(id, out.size()).second) {
      throw ValidationError("duplicate id '" + id + "' in '" + path.string() + "'");
    }
    out.emplace_back(std::move(id), value);
  }
  return out;
}

PairedSample align_scores(const ScoreList& a, const ScoreList& b) {
  std::unordered_map<std::string, double> by_id;
  for (const auto& [id, v] : b) by_id.emplace(id, v);
  if (by_id.size() != a.size()) {
    throw ValidationError("score files cover " + std::to_string(a.size()) + " and " +
                          std::to_string(by_id.size()) + " ids");
  }
  PairedSample s;
  for (const auto& [id, v] : a) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError("id '" + id + "' missing from second score file");
    s.ids.push_back(id);
    s.a.push_back(v);
    s.b.push_back(it->second);
  }
  return s;
}

}  // namespace zebra::stats
