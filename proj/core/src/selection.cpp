#include "zebra/selection.hpp"

#include <algorithm>
#include <cctype>
#include <thread>
#include <tuple>
#include <unordered_set>

#include "zebra/error.hpp"

namespace zebra {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::sup: return "sup";
    case Strategy::sim: return "sim";
    case Strategy::sup_sim: return "sup-sim";
  }
  return "sup";
}

Strategy parse_strategy(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "sup") return Strategy::sup;
  if (s == "sim") return Strategy::sim;
  if (s == "sup-sim" || s == "sup+sim" || s == "sup_sim") return Strategy::sup_sim;
  throw ConfigError("unknown strategy '" + std::string(text) + "' (expected sup, sim or sup-sim)");
}

std::string_view to_string(TieBreak tie_break) {
  return tie_break == TieBreak::skip ? "skip" : "lexicographic";
}

TieBreak parse_tie_break(std::string_view text) {
  if (text == "lexicographic") return TieBreak::lexicographic;
  if (text == "skip") return TieBreak::skip;
  throw ConfigError("unknown tie-break policy '" + std::string(text) + "'");
}

void StrategyConfig::validate() const {
  if (!(tau >= -1.0 && tau <= 1.0)) {
    throw ConfigError("tau must lie in [-1, 1], got " + std::to_string(tau));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

std::string_view to_string(NoPairReason reason) {
  switch (reason) {
    case NoPairReason::insufficient_candidates: return "insufficient_candidates";
    case NoPairReason::below_tau: return "below_tau";
    case NoPairReason::tie_skipped: return "tie_skipped";
    case NoPairReason::global_pair_unavailable: return "global_pair_unavailable";
  }
  return "unknown";
}

BehaviorIndex::BehaviorIndex(std::vector<AbilityProfile> profiles, SimilarityMatrix similarity)
    : profiles_(std::move(profiles)), similarity_(std::move(similarity)) {
  if (similarity_.size() != profiles_.size()) {
    throw DimensionError("similarity matrix covers " + std::to_string(similarity_.size()) +
                         " models, profiles cover " + std::to_string(profiles_.size()));
  }
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    if (similarity_.models()[i] != profiles_[i].model) {
      throw DimensionError("similarity matrix row " + std::to_string(i) + " is '" +
                           similarity_.models()[i] + "', profile is '" + profiles_[i].model + "'");
    }
    if (!by_name_.emplace(profiles_[i].model, i).second) {
      throw SchemaError("duplicate profile '" + profiles_[i].model + "'");
    }
  }
  ranking_.resize(profiles_.size());
  for (std::size_t i = 0; i < ranking_.size(); ++i) ranking_[i] = i;
  std::sort(ranking_.begin(), ranking_.end(), [this](std::size_t a, std::size_t b) {
    if (profiles_[a].mb_sup != profiles_[b].mb_sup) return profiles_[a].mb_sup > profiles_[b].mb_sup;
    return profiles_[a].model < profiles_[b].model;
  });
}

BehaviorIndex::BehaviorIndex(const ProfileSet& set) : BehaviorIndex(set.profiles, set.similarity) {}

std::optional<std::size_t> BehaviorIndex::find(std::string_view model) const {
  auto it = by_name_.find(std::string(model));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t BehaviorIndex::lookup(std::string_view model) const {
  if (auto i = find(model)) return *i;
  throw LookupError("model '" + std::string(model) + "' has no behavior profile");
}

namespace {

struct Resolved {
  std::size_t position;  // within CandidateSet::available
  std::size_t profile;   // within BehaviorIndex
  const std::string* name;
  double sup;
};

// Orients an unordered pair so that the higher mb_sup side is chosen.
Selection orient(const Resolved& x, const Resolved& y, const BehaviorIndex& index,
                 const StrategyConfig& config) {
  const Resolved* chosen = &x;
  const Resolved* rejected = &y;
  bool tie = x.sup == y.sup;
  if (tie) {
    if (config.tie_break == TieBreak::skip) return NoPair{NoPairReason::tie_skipped};
    if (*y.name < *x.name) std::swap(chosen, rejected);
  } else if (y.sup > x.sup) {
    std::swap(chosen, rejected);
  }
  SelectedPair pair;
  pair.chosen_model = *chosen->name;
  pair.rejected_model = *rejected->name;
  pair.chosen_index = chosen->position;
  pair.rejected_index = rejected->position;
  pair.mb_sim = index.sim(chosen->profile, rejected->profile);
  pair.chosen_sup = chosen->sup;
  pair.rejected_sup = rejected->sup;
  pair.strategy = config.strategy;
  pair.tie_resolved = tie;
  return pair;
}

// (mb_sup desc, name asc)
bool ranks_before(const Resolved& a, const Resolved& b) {
  if (a.sup != b.sup) return a.sup > b.sup;
  return *a.name < *b.name;
}

Selection select_sup(const std::vector<Resolved>& cands, const BehaviorIndex& index,
                     const StrategyConfig& config) {
  if (config.global_top2) {
    const auto& ranking = index.global_ranking();
    if (ranking.size() < 2) return NoPair{NoPairReason::insufficient_candidates};
    const Resolved* first = nullptr;
    const Resolved* second = nullptr;
    for (const auto& c : cands) {
      if (c.profile == ranking[0]) first = &c;
      if (c.profile == ranking[1]) second = &c;
    }
    if (!first || !second) return NoPair{NoPairReason::global_pair_unavailable};
    return orient(*first, *second, index, config);
  }
  const Resolved* best = &cands[0];
  const Resolved* runner_up = nullptr;
  for (std::size_t k = 1; k < cands.size(); ++k) {
    const Resolved* c = &cands[k];
    if (ranks_before(*c, *best)) {
      runner_up = best;
      best = c;
    } else if (!runner_up || ranks_before(*c, *runner_up)) {
      runner_up = c;
    }
  }
  return orient(*best, *runner_up, index, config);
}

Selection select_gated(const std::vector<Resolved>& cands, const BehaviorIndex& index,
                       const StrategyConfig& config) {
  const Resolved* best_a = nullptr;
  const Resolved* best_b = nullptr;
  double best_score = 0.0;
  std::pair<const std::string*, const std::string*> best_key{nullptr, nullptr};

  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      const auto& a = cands[i];
      const auto& b = cands[j];
      double sim = index.sim(a.profile, b.profile);
      if (!(sim >= config.tau)) continue;
      double score = sim;
      if (config.strategy == Strategy::sup_sim) {
        score = config.lambda * ((a.sup + b.sup) / 2.0) + (1.0 - config.lambda) * sim;
      }
      auto key = *a.name < *b.name ? std::make_pair(a.name, b.name) : std::make_pair(b.name, a.name);
      bool better = !best_a || score > best_score ||
                    (score == best_score &&
                     std::tie(*key.first, *key.second) < std::tie(*best_key.first, *best_key.second));
      if (better) {
        best_a = &a;
        best_b = &b;
        best_score = score;
        best_key = key;
      }
    }
  }
  if (!best_a) return NoPair{NoPairReason::below_tau};
  return orient(*best_a, *best_b, index, config);
}

}  // namespace

Selection select_pair(const CandidateSet& candidates, const BehaviorIndex& index,
                      const StrategyConfig& config) {
  std::vector<Resolved> cands;
  cands.reserve(candidates.available.size());
  std::unordered_set<std::string_view> seen;
  for (std::size_t k = 0; k < candidates.available.size(); ++k) {
    const auto& c = candidates.available[k];
    if (!seen.insert(c.model).second) {
      throw ValidationError("model '" + c.model + "' appears twice in instruction '" +
                            candidates.instruction_id + "'");
    }
    std::size_t p = index.lookup(c.model);
    cands.push_back({k, p, &c.model, index.mb_sup(p)});
  }
  if (cands.size() < 2) return NoPair{NoPairReason::insufficient_candidates};
  if (config.strategy == Strategy::sup) return select_sup(cands, index, config);
  return select_gated(cands, index, config);
}

void SelectionReport::merge(const SelectionReport& other) {
  instructions += other.instructions;
  pairs_emitted += other.pairs_emitted;
  degenerate_text += other.degenerate_text;
  tie_resolved += other.tie_resolved;
  for (const auto& [reason, count] : other.no_pair) no_pair[reason] += count;
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  for (const auto& [model, f] : other.frequencies) {
    auto& mine = frequencies[model];
    mine.chosen += f.chosen;
    mine.rejected += f.rejected;
  }
}

ordered_json SelectionReport::to_json() const {
  ordered_json doc = ordered_json::object();
  doc["instructions"] = instructions;
  doc["pairs_emitted"] = pairs_emitted;
  ordered_json reasons = ordered_json::object();
  for (auto r : {NoPairReason::insufficient_candidates, NoPairReason::below_tau,
                 NoPairReason::tie_skipped, NoPairReason::global_pair_unavailable}) {
    auto it = no_pair.find(std::string(to_string(r)));
    reasons[std::string(to_string(r))] = it == no_pair.end() ? 0 : it->second;
  }
  doc["no_pair"] = std::move(reasons);
  doc["degenerate_text"] = degenerate_text;
  doc["tie_resolved"] = tie_resolved;
  ordered_json errs = ordered_json::array();
  for (const auto& e : errors) {
    errs.push_back(ordered_json{{"instruction_id", e.instruction_id}, {"message", e.message}});
  }
  doc["errors"] = std::move(errs);
  ordered_json freq = ordered_json::object();
  for (const auto& [model, f] : frequencies) {
    freq[model] = ordered_json{{"chosen", f.chosen}, {"rejected", f.rejected}};
  }
  doc["frequencies"] = std::move(freq);
  return doc;
}

std::optional<PreferencePair> binarize_record(const InstructionRecord& record,
                                              const BehaviorIndex& index,
                                              const StrategyConfig& config,
                                              const BinarizeOptions& options,
                                              SelectionReport& report) {
  ++report.instructions;
  CandidateSet cands{record.instruction_id, {}};
  cands.available.reserve(record.responses.size());
  for (const auto& r : record.responses) {
    const auto& ex = options.excluded_models;
    if (std::find(ex.begin(), ex.end(), r.model) != ex.end()) continue;
    cands.available.push_back({r.model, r.text});
  }

  Selection sel;
  try {
    sel = select_pair(cands, index, config);
  } catch (const Error& e) {
    if (options.strict) throw;
    report.errors.push_back({record.instruction_id, e.what()});
    return std::nullopt;
  }

  if (const auto* none = std::get_if<NoPair>(&sel)) {
    ++report.no_pair[std::string(to_string(none->reason))];
    return std::nullopt;
  }
  const auto& s = std::get<SelectedPair>(sel);
  PreferencePair pair;
  pair.instruction_id = record.instruction_id;
  pair.instruction = record.instruction;
  pair.chosen = {s.chosen_model, cands.available[s.chosen_index].text, s.chosen_sup};
  pair.rejected = {s.rejected_model, cands.available[s.rejected_index].text, s.rejected_sup};
  pair.mb_sim = s.mb_sim;
  pair.strategy = std::string(to_string(s.strategy));
  if (pair.chosen.text == pair.rejected.text) {
    pair.flags.emplace_back(flags::degenerate_text);
    ++report.degenerate_text;
  }
  if (s.tie_resolved) {
    pair.flags.emplace_back(flags::tie_break_lexicographic);
    ++report.tie_resolved;
  }
  ++report.pairs_emitted;
  ++report.frequencies[pair.chosen.model].chosen;
  ++report.frequencies[pair.rejected.model].rejected;
  return pair;
}

SelectionReport binarize_pool(const RecordSource& next, const BehaviorIndex& index,
                              const StrategyConfig& config, const PairSink& emit,
                              const BinarizeOptions& options) {
  config.validate();
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);

  SelectionReport total;
  if (threads == 1) {
    while (auto record = next()) {
      if (auto pair = binarize_record(*record, index, config, options, total)) emit(*pair);
    }
    return total;
  }

  std::vector<InstructionRecord> batch;
  batch.reserve(batch_size);
  auto flush = [&] {
    if (batch.empty()) return;
    std::size_t workers = std::min<std::size_t>(threads, batch.size());
    std::size_t chunk = (batch.size() + workers - 1) / workers;
    std::vector<std::optional<PreferencePair>> pairs(batch.size());
    std::vector<SelectionReport> reports(workers);
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = std::min(batch.size(), w * chunk);
        std::size_t end = std::min(batch.size(), begin + chunk);
        pool.emplace_back([&, w, begin, end] {
          try {
            for (std::size_t k = begin; k < end; ++k) {
              pairs[k] = binarize_record(batch[k], index, config, options, reports[w]);
            }
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
    for (auto& p : pairs) {
      if (p) emit(*p);
    }
    for (const auto& r : reports) total.merge(r);
    batch.clear();
  };

  while (auto record = next()) {
    batch.push_back(std::move(*record));
    if (batch.size() == batch_size) flush();
  }
  flush();
  return total;
}

std::vector<PreferencePair> binarize_pool(const std::vector<InstructionRecord>& pool,
                                          const BehaviorIndex& index,
                                          const StrategyConfig& config,
                                          SelectionReport& report,
                                          const BinarizeOptions& options) {
  std::size_t pos = 0;
  RecordSource next = [&]() -> std::optional<InstructionRecord> {
    if (pos == pool.size()) return std::nullopt;
    return pool[pos++];
  };
  std::vector<PreferencePair> out;
  report = binarize_pool(next, index, config, [&](const PreferencePair& p) { out.push_back(p); },
                         options);
  return out;
}

}  // namespace zebra
