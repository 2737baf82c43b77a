// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Expected values come from the published leaderboard data or from
// the independent oracles under tests/oracles.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "cli/run_record.hpp"
#include "oracles/jacobi_pca.hpp"
#include "oracles/linkage_oracle.hpp"
#include "oracles/normalize_oracle.hpp"
#include "oracles/pair_oracle.hpp"
#include "oracles/signflip_enumeration.hpp"
#include "oracles/t_integration.hpp"
#include "oracles/tfidf_oracle.hpp"
#include "support/fixtures.hpp"
#include "zebra/analysis/cluster.hpp"
#include "zebra/analysis/pca.hpp"
#include "zebra/analysis/tfidf.hpp"
#include "zebra/dataset_io.hpp"
#include "zebra/selection.hpp"
#include "zebra/stats.hpp"

using namespace zebra;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

namespace {

// Collects failures for one criterion; the first few are printed.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int run_cli(const std::vector<std::string>& args, std::string* stdout_text = nullptr) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  if (stdout_text) *stdout_text = out.str();
  if (code != 0 && code != cli::kExitEmpty) std::cerr << err.str();
  return code;
}

json read_json(const fs::path& path) { return json::parse(testing::slurp(path)); }

std::vector<AbilityProfile> profiles_from(const json& doc) {
  std::vector<AbilityProfile> out;
  for (const auto& m : doc["models"]) {
    out.push_back({m["model"], m["vector"].get<std::vector<double>>(), m["mb_sup"]});
  }
  return out;
}

void write_pool(const fs::path& path, const std::vector<InstructionRecord>& pool) {
  std::ostringstream text;
  for (const auto& rec : pool) text << to_json(rec).dump() << '\n';
  testing::spit(path, text.str());
}

// ---------------------------------------------------------------------------

void leaderboard_averages(Check& c, const fs::path& dir) {
  auto out = dir / "profiles.json";
  auto start = Clock::now();
  int code = run_cli({"profile", "--benchmarks", testing::table5_path().string(), "--out", out.string()});
  double elapsed = seconds_since(start);
  c.expect(code == 0, "profile exited with " + std::to_string(code));
  if (code != 0) return;
  auto doc = read_json(out);
  auto published = testing::published_averages();
  c.expect(doc["models"].size() == 16, "expected 16 profiles");
  c.expect(published.size() == 16, "expected 16 published averages");
  for (const auto& m : doc["models"]) {
    std::string name = m["model"];
    double got = m["mb_sup"];
    auto it = published.find(name);
    if (it == published.end()) {
      c.expect(false, "no published average for " + name);
      continue;
    }
    c.expect(std::abs(got - it->second) <= 0.01,
             name + ": " + std::to_string(got) + " vs " + std::to_string(it->second));
  }
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
}

void similarity_ordering(Check& c) {
  auto table = testing::load_table5();
  auto set = build_profile_set(table);
  auto raw = oracle::minmax_profiles(table.scores());
  std::vector<std::vector<double>> vecs;
  for (const auto& p : raw) {
    vecs.emplace_back(p.vector.begin(), p.vector.end());
  }
  auto idx = [&](const std::string& name) {
    auto i = table.find_model(name);
    if (!i) throw std::runtime_error("missing model " + name);
    return *i;
  };
  auto l7 = idx("Llama-2-7b-chat"), l13 = idx("Llama-2-13b-chat"), wiz = idx("WizardLM-7b");
  long double close = oracle::brute_cosine(vecs[l7], vecs[l13]);
  long double far = oracle::brute_cosine(vecs[l7], vecs[wiz]);
  c.expect(close > far, "oracle ordering does not hold");
  double lib_close = set.similarity.at(l7, l13), lib_far = set.similarity.at(l7, wiz);
  c.expect(lib_close > lib_far, "library ordering does not hold");
  c.expect(std::abs(lib_close - static_cast<double>(close)) < 1e-12, "7b/13b cosine differs from oracle");
  c.expect(std::abs(lib_far - static_cast<double>(far)) < 1e-12, "7b/WizardLM cosine differs from oracle");
  for (std::size_t i = 0; i < vecs.size(); ++i)
    for (std::size_t j = 0; j < vecs.size(); ++j)
      c.expect(std::abs(set.similarity.at(i, j) - static_cast<double>(oracle::brute_cosine(vecs[i], vecs[j]))) <
                   1e-12,
               "similarity cell differs from oracle");
}

void strategy_equivalence(Check& c) {
  std::mt19937_64 rng(20240501);
  auto profiles = testing::random_profiles(rng, 24, 6, 5);
  auto sim = similarity_matrix(profiles);
  BehaviorIndex index(profiles, sim);
  std::vector<std::string> names;
  for (const auto& p : profiles) names.push_back(p.model);
  auto pool = testing::random_pool(rng, names, 1000, 2, 8);

  auto start = Clock::now();
  std::size_t compared = 0, agreed = 0;
  const std::pair<Strategy, oracle::OracleStrategy> strategies[] = {
      {Strategy::sup, oracle::OracleStrategy::sup},
      {Strategy::sim, oracle::OracleStrategy::sim},
      {Strategy::sup_sim, oracle::OracleStrategy::sup_sim}};
  for (const auto& rec : pool) {
    CandidateSet set{rec.instruction_id, {}};
    std::vector<oracle::OracleCandidate> cands;
    std::vector<std::size_t> ids;
    for (const auto& r : rec.responses) {
      set.available.push_back({r.model, r.text});
      ids.push_back(index.lookup(r.model));
      cands.push_back({r.model, index.mb_sup(ids.back())});
    }
    auto pair_sim = [&](std::size_t i, std::size_t j) { return index.sim(ids[i], ids[j]); };
    for (const auto& [strategy, oracle_strategy] : strategies) {
      StrategyConfig cfg;
      cfg.strategy = strategy;
      cfg.tau = 0.6;
      cfg.lambda = 0.5;
      auto sel = select_pair(set, index, cfg);
      auto want = oracle::enumerate_best_pair(cands, pair_sim, oracle_strategy, cfg.tau, cfg.lambda, false);
      oracle::OracleOutcome got;
      if (const auto* p = std::get_if<SelectedPair>(&sel)) {
        got = {true, p->chosen_model, p->rejected_model, ""};
      } else {
        got = {false, "", "", std::string(to_string(std::get<NoPair>(sel).reason))};
      }
      ++compared;
      if (got == want) {
        ++agreed;
      } else {
        c.expect(false, rec.instruction_id + " " + std::string(to_string(strategy)) + ": got " + got.chosen +
                            "/" + got.rejected + got.reason + ", oracle " + want.chosen + "/" + want.rejected +
                            want.reason);
      }
    }
  }
  double elapsed = seconds_since(start);
  c.expect(compared == 3000 && agreed == compared,
           std::to_string(agreed) + "/" + std::to_string(compared) + " agree");
  c.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
}

// Re-reads emitted JSONL with a plain JSON parser and re-derives every
// pair's scores from profiles.json.
void gate_and_anchoring(Check& c, const fs::path& dir) {
  auto profiles_path = dir / "profiles.json";
  if (!fs::exists(profiles_path)) {
    run_cli({"profile", "--benchmarks", testing::table5_path().string(), "--out", profiles_path.string()});
  }
  auto profiles = read_json(profiles_path);
  std::map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < profiles["models"].size(); ++i) row[profiles["models"][i]["model"]] = i;

  std::mt19937_64 rng(99);
  std::vector<std::string> names;
  for (const auto& [name, i] : row) names.push_back(name);
  auto pool_path = dir / "gate_pool.jsonl";
  write_pool(pool_path, testing::random_pool(rng, names, 2000, 2, 8));

  struct Run {
    std::string strategy, tau;
  };
  std::size_t checked = 0;
  for (const Run& r : {Run{"sup", "0.1"}, Run{"sim", "0.9"}, Run{"sup-sim", "0.95"}, Run{"sup-sim", "-1"},
                       Run{"sim", "0.99"}}) {
    auto out = dir / ("gate-" + r.strategy + r.tau + ".jsonl");
    int code = run_cli({"binarize", "--profiles", profiles_path.string(), "--pool", pool_path.string(), "--out",
                        out.string(), "--strategy", r.strategy, "--tau", r.tau, "--threads", "2"});
    c.expect(code == 0 || code == cli::kExitEmpty, r.strategy + " exited with " + std::to_string(code));
    std::istringstream lines(testing::slurp(out));
    std::string line;
    double tau = std::stod(r.tau);
    while (std::getline(lines, line)) {
      auto p = json::parse(line);
      const std::string chosen = p["chosen"]["model"], rejected = p["rejected"]["model"];
      double cs = p["chosen"]["mb_sup"], rs = p["rejected"]["mb_sup"], s = p["mb_sim"];
      ++checked;
      c.expect(chosen != rejected, "self pair in " + line);
      c.expect(cs >= rs, "chosen_sup < rejected_sup in " + line);
      if (r.strategy != "sup") c.expect(s >= tau, "mb_sim below tau in " + line);
      auto ci = row.at(chosen), ri = row.at(rejected);
      c.expect(cs == profiles["models"][ci]["mb_sup"].get<double>(), "chosen mb_sup mismatch in " + line);
      c.expect(rs == profiles["models"][ri]["mb_sup"].get<double>(), "rejected mb_sup mismatch in " + line);
      c.expect(s == profiles["similarity"][ci][ri].get<double>(), "mb_sim mismatch in " + line);
    }
  }
  c.expect(checked > 0, "no pairs were emitted at all");
}

void determinism(Check& c, const fs::path& dir) {
  std::mt19937_64 rng(5);
  auto pool_path = dir / "det_pool.jsonl";
  write_pool(pool_path, testing::random_pool(rng, testing::load_table5().models(), 5000, 2, 8));
  std::vector<std::string> digests;
  for (int k = 0; k < 2; ++k) {
    auto out = dir / ("det-" + std::to_string(k) + ".jsonl");
    int code = run_cli({"binarize", "--benchmarks", testing::table5_path().string(), "--pool", pool_path.string(),
                        "--out", out.string(), "--strategy", "sup-sim", "--threads", k ? "4" : "1"});
    c.expect(code == 0, "binarize exited with " + std::to_string(code));
    digests.push_back(cli::sha256_file(out));
  }
  c.expect(digests[0] == digests[1], "pairs.jsonl digests differ: " + digests[0] + " vs " + digests[1]);
}

void statistics(Check& c) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    std::size_t n = 6 + static_cast<std::size_t>(k) * 9;
    stats::PairedSample s;
    for (std::size_t i = 0; i < n; ++i) {
      s.a.push_back(0.5 + 0.05 * k + 0.2 * noise(rng));
      s.b.push_back(0.5 + 0.2 * noise(rng));
    }
    auto r = stats::paired_t_test(s);
    double want = oracle::t_two_sided_p(r.t_stat, static_cast<double>(n - 1));
    c.expect(std::abs(r.p_t - want) <= 1e-6,
             "t-test sample " + std::to_string(k) + ": " + std::to_string(r.p_t) + " vs " + std::to_string(want));
  }
  for (std::size_t n = 2; n <= 12; ++n) {
    stats::PairedSample s;
    for (std::size_t i = 0; i < n; ++i) {
      s.a.push_back(0.25 + noise(rng));
      s.b.push_back(0.0);
    }
    double exact = oracle::exact_signflip_p(s.differences());
    auto r = stats::permutation_test(s, 10000, 1000 + n);
    double se = std::sqrt(exact * (1.0 - exact) / 10000.0);
    // +1/(B+1) covers the add-one numerator.
    c.expect(std::abs(r.p_perm - exact) <= 3.0 * se + 1.0 / 10001.0,
             "n=" + std::to_string(n) + ": " + std::to_string(r.p_perm) + " vs exact " + std::to_string(exact));
  }
  stats::PairedSample s{{}, {1, 2, 3, 5}, {0.5, 2.5, 2, 3}};
  auto doc = stats::to_json(stats::compare(s, 1000, 1));
  for (const char* key : {"t", "p_t", "mean_delta", "p_perm"}) c.expect(doc.contains(key), "missing field " + std::string(key));
}

void tfidf_overlap(Check& c) {
  static const std::vector<std::string> vocab{
      "model",  "answer", "river", "stone", "python", "matrix", "garden", "planet", "signal", "bridge",
      "number", "copper", "violet", "harbor", "engine", "forest", "letter", "window", "silver", "candle"};
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  auto words = [&](std::size_t len) {
    std::string s;
    for (std::size_t k = 0; k < len; ++k) s += (k ? " " : "") + vocab[pick(rng)];
    return s;
  };
  std::vector<InstructionRecord> pool;
  for (std::size_t i = 0; i < 200; ++i) {
    std::string shared = words(20);
    pool.push_back({"t" + std::to_string(i), "Explain",
                    {{"close-a", shared + " " + words(5)},
                     {"close-b", shared + " " + words(5)},
                     {"far-a", words(25)},
                     {"far-b", words(25)}}});
  }
  auto high = analysis::tfidf_audit(pool, "close-a", "close-b");
  auto low = analysis::tfidf_audit(pool, "far-a", "far-b");
  c.expect(high.n_instructions == 200 && low.n_instructions == 200, "expected 200 shared instructions");
  c.expect(high.mean_pair_similarity > low.mean_pair_similarity,
           std::to_string(high.mean_pair_similarity) + " <= " + std::to_string(low.mean_pair_similarity));
  c.expect(std::abs(high.mean_pair_similarity - oracle::mean_tfidf_similarity(pool, "close-a", "close-b")) < 1e-12,
           "high-overlap mean differs from oracle");
  c.expect(std::abs(low.mean_pair_similarity - oracle::mean_tfidf_similarity(pool, "far-a", "far-b")) < 1e-12,
           "low-overlap mean differs from oracle");
}

void cost_rows(Check& c, const fs::path& dir) {
  auto out = dir / "cost.json";
  std::string text;
  int code = run_cli({"cost", "--rows", (testing::data_dir() / "labeling_cost.csv").string(), "--out", out.string()},
                     &text);
  c.expect(code == 0, "cost exited with " + std::to_string(code));
  if (code != 0) return;
  auto rows = read_json(out)["rows"];
  c.expect(rows.size() == 4, "expected 3 published rows plus the zero-annotation row");
  if (rows.size() != 4) return;
  c.expect(rows[0]["total"].get<double>() == 16128.0, "UltraFeedback total");
  c.expect(std::abs(rows[1]["total"].get<double>() - 646.0) <= 1.0, "Safer-Instruct total");
  c.expect(rows[2]["total"].get<double>() == 124614.0, "OpenHermesPreferences total");
  c.expect(rows[3]["total"].get<double>() == 0.0, "zero-annotation total");
  c.expect(text.find("16128.0 USD") != std::string::npos, "stdout lacks the UltraFeedback row");
}

void cluster_and_pca(Check& c) {
  auto set = build_profile_set(testing::load_table5());
  const std::size_t n = set.profiles.size();
  std::vector<std::vector<double>> vecs;
  for (const auto& p : set.profiles) vecs.push_back(p.vector);

  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dist[i][j] = i == j ? 0.0 : 1.0 - static_cast<double>(oracle::brute_cosine(vecs[i], vecs[j]));

  const std::pair<analysis::Linkage, oracle::OracleLinkage> linkages[] = {
      {analysis::Linkage::average, oracle::OracleLinkage::average},
      {analysis::Linkage::single, oracle::OracleLinkage::single},
      {analysis::Linkage::complete, oracle::OracleLinkage::complete}};
  for (const auto& [lib, naive] : linkages) {
    analysis::ClusterOptions opts;
    opts.linkage = lib;
    auto tree = analysis::cluster(set.profiles, set.benchmarks, opts);
    auto want = oracle::naive_linkage(dist, naive);
    std::string tag(analysis::to_string(lib));
    c.expect(tree.merges.size() == want.size(), tag + ": merge count");
    for (std::size_t k = 0; k < std::min(tree.merges.size(), want.size()); ++k) {
      const auto& m = tree.merges[k];
      c.expect(m.a == want[k].a && m.b == want[k].b && m.size == want[k].size,
               tag + ": merge " + std::to_string(k) + " joins different clusters");
      c.expect(std::abs(m.distance - want[k].distance) <= 1e-12, tag + ": merge " + std::to_string(k) + " height");
    }
  }

  auto proj = analysis::pca_project(set.profiles);
  auto want = oracle::brute_pca(vecs);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      c.expect(std::abs(proj.coords[i][k] - want.coords[i][k]) <= 1e-8,
               set.profiles[i].model + " PCA coordinate " + std::to_string(k));
  for (std::size_t k = 0; k < 2; ++k)
    c.expect(std::abs(proj.explained_variance[k] - want.explained[k]) <= 1e-8, "explained variance");
}

}  // namespace

int main() {
  testing::TempDir dir("acceptance");
  struct Criterion {
    const char* name;
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria{
      {"1 leaderboard average scores within 0.01", [&](Check& c) { leaderboard_averages(c, dir.path()); }},
      {"2 Llama-2 similarity ordering", similarity_ordering},
      {"3 strategy oracle equivalence", strategy_equivalence},
      {"4 gate and anchoring soundness", [&](Check& c) { gate_and_anchoring(c, dir.path()); }},
      {"5 byte-identical binarize output", [&](Check& c) { determinism(c, dir.path()); }},
      {"6 t-test and permutation oracles", statistics},
      {"7 TF-IDF overlap ordering", tfidf_overlap},
      {"8 labeling cost rows", [&](Check& c) { cost_rows(c, dir.path()); }},
      {"9 dendrogram and PCA oracles", cluster_and_pca},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    auto start = Clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    double ms = seconds_since(start) * 1000.0;
    bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("[%s] %s (%.0f ms)\n", ok ? "PASS" : "FAIL", criterion.name, ms);
    for (std::size_t k = 0; k < std::min<std::size_t>(check.failures.size(), 5); ++k) {
      std::printf("       %s\n", check.failures[k].c_str());
    }
    if (check.failures.size() > 5) std::printf("       ... %zu more\n", check.failures.size() - 5);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
