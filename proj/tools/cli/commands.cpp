#include "cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli/run_record.hpp"
#include "zebra/analysis/cluster.hpp"
#include "zebra/analysis/frequency.hpp"
#include "zebra/analysis/pca.hpp"
#include "zebra/analysis/tfidf.hpp"
#include "zebra/benchmark_table.hpp"
#include "zebra/cost.hpp"
#include "zebra/dataset_io.hpp"
#include "zebra/error.hpp"
#include "zebra/profile.hpp"
#include "zebra/selection.hpp"
#include "zebra/stats.hpp"

namespace zebra::cli {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_color_mt("zebra");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  if (const char* env = std::getenv("ZEBRA_LOG")) {
    log->set_level(spdlog::level::from_str(env));
  }
  return log;
}

// Where to put run.json when --run-json is not given.
fs::path default_run_json(const fs::path& primary_output) {
  auto dir = primary_output.parent_path();
  return (dir.empty() ? fs::path(".") : dir) / "run.json";
}

void write_json_file(const ordered_json& doc, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << dump_pretty(doc) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// Writes to `path`, or to `out` when path is empty.
void emit_json(const ordered_json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << dump_pretty(doc) << '\n';
  } else {
    write_json_file(doc, path);
  }
}

struct ProfileSource {
  std::string profiles;
  std::string benchmarks;
  std::string format;
  std::string categories;
  std::string missing = "impute";
  std::vector<std::string> exclude;
};

void add_profile_source(CLI::App* cmd, ProfileSource& src, bool allow_profiles_json) {
  auto* bench = cmd->add_option("--benchmarks", src.benchmarks, "Benchmark score table (CSV or JSON)");
  cmd->add_option("--format", src.format, "Table format: csv | json (default: by extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--categories", src.categories, "JSON map of benchmark -> category");
  cmd->add_option("--missing", src.missing, "Missing score policy: impute | exclude")
      ->check(CLI::IsMember({"impute", "exclude"}));
  cmd->add_option("--exclude", src.exclude, "Models to drop before normalizing")->expected(0, -1);
  if (allow_profiles_json) {
    auto* prof = cmd->add_option("--profiles", src.profiles, "profiles.json from `zebra profile`");
    prof->excludes(bench);
  }
}

ProfileSet resolve_profiles(const ProfileSource& src, RunRecord& record) {
  auto& cfg = record.config();
  if (!src.profiles.empty()) {
    record.add_input(src.profiles);
    cfg["profiles"] = src.profiles;
    return load_profile_set(src.profiles);
  }
  if (src.benchmarks.empty()) throw ConfigError("one of --benchmarks or --profiles is required");
  record.add_input(src.benchmarks);
  TableFormat format = src.format.empty() ? table_format_for(src.benchmarks)
                       : src.format == "json" ? TableFormat::json
                                              : TableFormat::csv;
  BenchmarkTable table = load_benchmark_table(src.benchmarks, format);
  if (!src.categories.empty()) {
    record.add_input(src.categories);
    table.set_categories(load_category_map(src.categories));
  }
  if (!src.exclude.empty()) table = table.without_models(src.exclude);
  NormalizeOptions opts;
  opts.missing = src.missing == "exclude" ? MissingPolicy::exclude : MissingPolicy::impute;

  cfg["benchmarks"] = src.benchmarks;
  cfg["format"] = format == TableFormat::json ? "json" : "csv";
  if (!src.categories.empty()) cfg["categories"] = src.categories;
  cfg["missing"] = src.missing;
  cfg["exclude"] = src.exclude;

  ProfileSet set = build_profile_set(table, opts);
  for (const auto& p : set.profiles) {
    if (p.imputed) logger()->warn("profile '{}' has imputed scores", p.model);
  }
  for (const auto& m : set.similarity.zero_vector_models()) {
    logger()->warn("model '{}' has an all-zero ability vector; similarity set to 0", m);
  }
  return set;
}

struct Context {
  std::vector<std::string> argv;
  std::ostream& out;
};

// profile -----------------------------------------------------------------

struct ProfileArgs {
  ProfileSource source;
  std::string out;
  std::string run_json;
};

int cmd_profile(const ProfileArgs& a, Context& ctx) {
  RunRecord record("profile", ctx.argv);
  ProfileSet set = resolve_profiles(a.source, record);
  save_profile_set(set, a.out);
  record.add_output(a.out);
  record.write(a.run_json.empty() ? default_run_json(a.out) : fs::path(a.run_json));
  logger()->info("wrote {} profiles to {}", set.profiles.size(), a.out);
  ctx.out << set.profiles.size() << " profiles over " << set.benchmarks.size()
          << " benchmarks -> " << a.out << '\n';
  return kExitOk;
}

// binarize ----------------------------------------------------------------

struct BinarizeArgs {
  ProfileSource source;
  std::string pool;
  std::string out;
  std::string report;
  std::string run_json;
  std::string strategy = "sup";
  double tau = 0.1;
  double lambda = 0.5;
  std::string tie_break = "lexicographic";
  bool global_top2 = false;
  bool strict = false;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> drop_models;
};

int cmd_binarize(const BinarizeArgs& a, Context& ctx) {
  StrategyConfig cfg;
  cfg.strategy = parse_strategy(a.strategy);
  cfg.tau = a.tau;
  cfg.lambda = a.lambda;
  cfg.tie_break = parse_tie_break(a.tie_break);
  cfg.global_top2 = a.global_top2;
  cfg.validate();
  if (cfg.global_top2 && cfg.strategy != Strategy::sup) {
    throw ConfigError("--global-top2 only applies to the sup strategy");
  }

  RunRecord record("binarize", ctx.argv);
  ProfileSet set = resolve_profiles(a.source, record);
  BehaviorIndex index(set);

  BinarizeOptions opts;
  opts.strict = a.strict;
  opts.threads = a.threads;
  opts.excluded_models = a.source.exclude;
  opts.excluded_models.insert(opts.excluded_models.end(), a.drop_models.begin(), a.drop_models.end());

  fs::path report_path = a.report.empty() ? fs::path(a.out).parent_path() / "report.json"
                                          : fs::path(a.report);
  if (fs::path(a.out) == report_path) throw ConfigError("--out and --report must differ");

  auto& c = record.config();
  c["pool"] = a.pool;
  c["strategy"] = std::string(to_string(cfg.strategy));
  c["tau"] = cfg.tau;
  c["lambda"] = cfg.lambda;
  c["tie_break"] = std::string(to_string(cfg.tie_break));
  c["global_top2"] = cfg.global_top2;
  c["strict"] = a.strict;
  c["seed"] = a.seed;
  c["drop_models"] = a.drop_models;
  record.add_input(a.pool);

  PoolReader reader{fs::path(a.pool)};
  PairWriter writer(a.out);
  SelectionReport report = binarize_pool([&] { return reader.next(); }, index, cfg,
                                         [&](const PreferencePair& p) { writer.write(p); }, opts);
  writer.commit();

  for (const auto& e : report.errors) {
    logger()->warn("instruction '{}': {}", e.instruction_id, e.message);
  }
  ordered_json report_doc = report.to_json();
  write_json_file(report_doc, report_path);
  record.add_output(a.out);
  record.add_output(report_path);
  record.write(a.run_json.empty() ? default_run_json(a.out) : fs::path(a.run_json));

  ctx.out << report.pairs_emitted << " pairs from " << report.instructions << " instructions -> "
          << a.out << '\n';
  if (report.pairs_emitted == 0) {
    logger()->error("no pairs were emitted");
    return kExitEmpty;
  }
  return kExitOk;
}

// convert-ultrafeedback ---------------------------------------------------

struct ConvertArgs {
  std::string in;
  std::string out;
};

int cmd_convert(const ConvertArgs& a, Context& ctx) {
  std::ifstream in(a.in, std::ios::binary);
  if (!in) throw IoError("cannot open '" + a.in + "'");
  fs::path partial = a.out + ".partial";
  ConversionStats stats;
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + partial.string() + "'");
    try {
      stats = convert_ultrafeedback(in, out);
    } catch (...) {
      out.close();
      std::error_code ec;
      fs::remove(partial, ec);
      throw;
    }
  }
  fs::rename(partial, a.out);
  if (stats.dropped_duplicates > 0) {
    logger()->warn("dropped {} repeated-model completions", stats.dropped_duplicates);
  }
  if (stats.skipped_empty > 0) {
    logger()->warn("skipped {} rows without completions", stats.skipped_empty);
  }
  ctx.out << stats.records << " records from " << stats.rows << " rows -> " << a.out << '\n';
  return kExitOk;
}

// analyze -----------------------------------------------------------------

struct PcaArgs {
  ProfileSource source;
  std::string out;
};

int cmd_pca(const PcaArgs& a, Context& ctx) {
  RunRecord record("analyze pca", ctx.argv);
  ProfileSet set = resolve_profiles(a.source, record);
  auto projection = analysis::pca_project(set.profiles);
  if (projection.degenerate) logger()->warn("all ability vectors are identical; projection is degenerate");
  emit_json(analysis::to_json(projection), a.out, ctx.out);
  return kExitOk;
}

struct ClusterArgs {
  ProfileSource source;
  std::string out;
  double cut = 0.4;
  std::string linkage = "average";
  std::vector<std::string> categories;
};

int cmd_cluster(const ClusterArgs& a, Context& ctx) {
  RunRecord record("analyze cluster", ctx.argv);
  ProfileSet set = resolve_profiles(a.source, record);
  analysis::ClusterOptions opts;
  opts.cut = a.cut;
  opts.linkage = analysis::parse_linkage(a.linkage);
  for (const auto& c : a.categories) opts.categories.push_back(parse_category(c));
  auto dendrogram = analysis::cluster(set.profiles, set.benchmarks, opts);
  emit_json(analysis::to_json(dendrogram), a.out, ctx.out);
  return kExitOk;
}

struct TfidfArgs {
  ProfileSource source;
  std::string pool;
  std::string out;
  std::vector<std::string> pairs;
  bool extremes = false;
};

std::pair<std::string, std::string> split_pair(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == text.size()) {
    throw ConfigError("--pair expects MODEL_A,MODEL_B, got '" + text + "'");
  }
  return {text.substr(0, comma), text.substr(comma + 1)};
}

// Most and least similar profiled pairs among models that share at least
// one instruction in the pool.
std::vector<std::pair<std::string, std::string>> extreme_pairs(const ProfileSet& set,
                                                               const std::string& pool_path) {
  BehaviorIndex index(set);
  std::set<std::pair<std::size_t, std::size_t>> cooccur;
  PoolReader reader{fs::path(pool_path)};
  while (auto rec = reader.next()) {
    std::vector<std::size_t> present;
    for (const auto& r : rec->responses) {
      if (auto i = index.find(r.model)) present.push_back(*i);
    }
    for (std::size_t x = 0; x < present.size(); ++x) {
      for (std::size_t y = x + 1; y < present.size(); ++y) {
        cooccur.insert(std::minmax(present[x], present[y]));
      }
    }
  }
  if (cooccur.empty()) throw AuditError("no two profiled models share an instruction");
  auto hi = *cooccur.begin();
  auto lo = hi;
  for (const auto& p : cooccur) {
    if (index.sim(p.first, p.second) > index.sim(hi.first, hi.second)) hi = p;
    if (index.sim(p.first, p.second) < index.sim(lo.first, lo.second)) lo = p;
  }
  return {{index.model(hi.first), index.model(hi.second)},
          {index.model(lo.first), index.model(lo.second)}};
}

int cmd_tfidf(const TfidfArgs& a, Context& ctx) {
  RunRecord record("analyze tfidf", ctx.argv);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::optional<ProfileSet> set;
  for (const auto& p : a.pairs) pairs.push_back(split_pair(p));
  if (a.extremes) {
    set = resolve_profiles(a.source, record);
    auto ex = extreme_pairs(*set, a.pool);
    pairs.insert(pairs.end(), ex.begin(), ex.end());
  }
  if (pairs.empty()) throw ConfigError("give at least one --pair or --extremes");

  PoolReader reader{fs::path(a.pool)};
  auto results = analysis::tfidf_audit([&] { return reader.next(); }, pairs);

  ordered_json list = ordered_json::array();
  for (const auto& r : results) {
    ordered_json entry = analysis::to_json(r);
    if (set) {
      BehaviorIndex index(*set);
      auto i = index.find(r.model_a);
      auto j = index.find(r.model_b);
      if (i && j) entry["mb_sim"] = index.sim(*i, *j);
    }
    list.push_back(std::move(entry));
  }
  ordered_json doc = ordered_json::object();
  doc["results"] = std::move(list);
  emit_json(doc, a.out, ctx.out);
  return kExitOk;
}

struct FreqArgs {
  std::string pairs;
  std::string profiles;
  std::string out;
};

int cmd_freq(const FreqArgs& a, Context& ctx) {
  std::vector<std::string> known;
  if (!a.profiles.empty()) {
    for (const auto& p : load_profile_set(a.profiles).profiles) known.push_back(p.model);
  }
  auto table = analysis::frequency_report(read_pairs(fs::path(a.pairs)), known);
  emit_json(analysis::to_json(table), a.out, ctx.out);
  return kExitOk;
}

// stats / cost ------------------------------------------------------------

struct StatsArgs {
  std::string a;
  std::string b;
  std::size_t permutations = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string run_json;
};

int cmd_stats(const StatsArgs& a, Context& ctx) {
  RunRecord record("stats compare", ctx.argv);
  record.add_input(a.a);
  record.add_input(a.b);
  record.config()["permutations"] = a.permutations;
  record.config()["seed"] = a.seed;
  auto sample = stats::align_scores(stats::load_scores(a.a), stats::load_scores(a.b));
  auto result = stats::compare(sample, a.permutations, a.seed, a.threads);
  if (result.t_test.all_zero) logger()->warn("all paired differences are zero");
  emit_json(stats::to_json(result), a.out, ctx.out);
  if (!a.out.empty()) {
    record.add_output(a.out);
    record.write(a.run_json.empty() ? default_run_json(a.out) : fs::path(a.run_json));
  } else if (!a.run_json.empty()) {
    record.write(a.run_json);
  }
  return kExitOk;
}

struct CostArgs {
  std::optional<std::int64_t> pairs;
  std::optional<double> unit_cost;
  std::string method = "instance-wise labeling";
  std::string rows;
  std::optional<std::int64_t> zero_pairs;
  std::string out;
};

std::vector<stats::CostRow> load_cost_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<stats::CostRow> rows;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text.front() == '#') continue;
    auto c2 = text.rfind(',');
    auto c1 = c2 == std::string::npos ? c2 : text.rfind(',', c2 - 1);
    if (c1 == std::string::npos) throw ParseError("expected method,pairs,unit_cost", line);
    std::string method = text.substr(0, c1);
    std::string pairs = text.substr(c1 + 1, c2 - c1 - 1);
    std::string unit = text.substr(c2 + 1);
    if (line == 1 && method == "method") continue;
    try {
      rows.push_back(stats::cost_report(method, std::stoll(pairs), std::stod(unit)));
    } catch (const std::logic_error&) {
      throw ParseError("non-numeric pairs or unit cost", line);
    }
  }
  return rows;
}

int cmd_cost(const CostArgs& a, Context& ctx) {
  std::vector<stats::CostRow> rows;
  if (!a.rows.empty()) rows = load_cost_rows(a.rows);
  if (a.pairs || a.unit_cost) {
    if (!a.pairs || !a.unit_cost) throw ConfigError("--pairs and --unit-cost go together");
    rows.push_back(stats::cost_report(a.method, *a.pairs, *a.unit_cost));
  }
  if (rows.empty()) throw ConfigError("give --pairs/--unit-cost or --rows");
  rows.push_back(stats::zero_annotation_row(a.zero_pairs.value_or(rows.front().pairs)));

  for (const auto& r : rows) {
    ctx.out << r.method << ": " << r.pairs << " x " << format_double(r.unit_cost) << " = "
            << format_double(r.total) << " USD\n";
  }
  if (!a.out.empty()) write_json_file(stats::to_json(rows), a.out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("zebra");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-annotation preference binarization from benchmark profiles", "zebra"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  Context ctx{std::vector<std::string>(argv + std::min(argc, 1), argv + argc), out};

  ProfileArgs profile_args;
  auto* profile = app.add_subcommand("profile", "Normalize benchmark scores into behavior profiles");
  add_profile_source(profile, profile_args.source, false);
  profile->get_option("--benchmarks")->required();
  profile->add_option("--out", profile_args.out, "Output profiles.json")->required();
  profile->add_option("--run-json", profile_args.run_json, "Run record path (default: next to --out)");

  BinarizeArgs bin;
  auto* binarize = app.add_subcommand("binarize", "Turn a response pool into chosen/rejected pairs");
  add_profile_source(binarize, bin.source, true);
  binarize->add_option("--pool", bin.pool, "Pool JSONL")->required();
  binarize->add_option("--out", bin.out, "Output pairs JSONL")->required();
  binarize->add_option("--report", bin.report, "Selection report (default: report.json next to --out)");
  binarize->add_option("--run-json", bin.run_json, "Run record path");
  binarize->add_option("--strategy", bin.strategy, "sup | sim | sup-sim");
  binarize->add_option("--tau", bin.tau, "Minimum similarity for sim and sup-sim");
  binarize->add_option("--lambda", bin.lambda, "Superiority weight for sup-sim");
  binarize->add_option("--tie-break", bin.tie_break, "lexicographic | skip")
      ->check(CLI::IsMember({"lexicographic", "skip"}));
  binarize->add_flag("--global-top2", bin.global_top2, "sup: use the two globally best models");
  binarize->add_flag("--strict", bin.strict, "Abort on the first bad instruction");
  binarize->add_option("--threads", bin.threads, "Selection worker threads (0 = all cores)");
  binarize->add_option("--seed", bin.seed, "Recorded seed (selection is deterministic)");
  binarize->add_option("--drop-model", bin.drop_models,
                       "Ignore responses from these models without renormalizing")
      ->expected(0, -1);

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert-ultrafeedback", "Convert an UltraFeedback export to pool JSONL");
  convert->add_option("--in", conv.in, "UltraFeedback JSONL")->required();
  convert->add_option("--out", conv.out, "Output pool JSONL")->required();

  auto* analyze = app.add_subcommand("analyze", "Behavior-space diagnostics");
  analyze->require_subcommand(1);

  PcaArgs pca_args;
  auto* pca = analyze->add_subcommand("pca", "2-D PCA projection of ability vectors");
  add_profile_source(pca, pca_args.source, true);
  pca->add_option("--out", pca_args.out, "pca.json (stdout if omitted)");

  ClusterArgs cl;
  auto* clus = analyze->add_subcommand("cluster", "Agglomerative clustering dendrogram");
  add_profile_source(clus, cl.source, true);
  clus->add_option("--out", cl.out, "dendrogram.json (stdout if omitted)");
  clus->add_option("--cut", cl.cut, "Cosine-distance cut");
  clus->add_option("--linkage", cl.linkage, "average | single | complete")
      ->check(CLI::IsMember({"average", "single", "complete"}));
  clus->add_option("--category", cl.categories, "Keep benchmarks of this category (repeatable)")
      ->expected(0, -1);

  TfidfArgs tf;
  auto* tfidf = analyze->add_subcommand("tfidf", "TF-IDF response similarity between model pairs");
  add_profile_source(tfidf, tf.source, true);
  tfidf->add_option("--pool", tf.pool, "Pool JSONL")->required();
  tfidf->add_option("--pair", tf.pairs, "MODEL_A,MODEL_B (repeatable)")->expected(0, -1);
  tfidf->add_flag("--extremes", tf.extremes, "Audit the most and least similar profiled pairs");
  tfidf->add_option("--out", tf.out, "Output JSON (stdout if omitted)");

  FreqArgs fr;
  auto* freq = analyze->add_subcommand("freq", "Chosen/rejected counts per model");
  freq->add_option("--pairs", fr.pairs, "Pairs JSONL")->required();
  freq->add_option("--profiles", fr.profiles, "profiles.json; lists unselected models with 0");
  freq->add_option("--out", fr.out, "frequencies.json (stdout if omitted)");

  auto* stats_cmd = app.add_subcommand("stats", "Significance tests");
  stats_cmd->require_subcommand(1);
  StatsArgs st;
  auto* cmp = stats_cmd->add_subcommand("compare", "Paired t-test and sign-flip permutation test");
  cmp->add_option("--a", st.a, "Scores of system A (id,score CSV)")->required();
  cmp->add_option("--b", st.b, "Scores of system B (id,score CSV)")->required();
  cmp->add_option("--permutations", st.permutations, "Number of sign-flip shuffles");
  cmp->add_option("--seed", st.seed, "RNG seed");
  cmp->add_option("--threads", st.threads, "Worker threads (0 = all cores)");
  cmp->add_option("--out", st.out, "Output JSON (stdout if omitted)");
  cmp->add_option("--run-json", st.run_json, "Run record path");

  CostArgs co;
  auto* cost = app.add_subcommand("cost", "Labeling-cost comparison");
  cost->add_option("--pairs", co.pairs, "Number of labeled pairs");
  cost->add_option("--unit-cost", co.unit_cost, "USD per pair");
  cost->add_option("--method", co.method, "Row label for --pairs/--unit-cost");
  cost->add_option("--rows", co.rows, "CSV of method,pairs,unit_cost rows");
  cost->add_option("--zero-pairs", co.zero_pairs, "Pair count for the zero-cost row (default: first row)");
  cost->add_option("--out", co.out, "Write rows as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (profile->parsed()) return cmd_profile(profile_args, ctx);
    if (binarize->parsed()) return cmd_binarize(bin, ctx);
    if (convert->parsed()) return cmd_convert(conv, ctx);
    if (pca->parsed()) return cmd_pca(pca_args, ctx);
    if (clus->parsed()) return cmd_cluster(cl, ctx);
    if (tfidf->parsed()) return cmd_tfidf(tf, ctx);
    if (freq->parsed()) return cmd_freq(fr, ctx);
    if (cmp->parsed()) return cmd_stats(st, ctx);
    if (cost->parsed()) return cmd_cost(co, ctx);
  } catch (const Error& e) {
    err << "zebra: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "zebra: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace zebra::cli
