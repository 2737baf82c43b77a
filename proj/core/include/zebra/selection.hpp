#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "zebra/json_format.hpp"
#include "zebra/profile.hpp"
#include "zebra/records.hpp"

namespace zebra {

enum class Strategy { sup, sim, sup_sim };

// "sup" | "sim" | "sup-sim"
std::string_view to_string(Strategy strategy);
// Also accepts "sup+sim" and "sup_sim", case-insensitive. Throws ConfigError.
Strategy parse_strategy(std::string_view text);

enum class TieBreak { lexicographic, skip };

std::string_view to_string(TieBreak tie_break);
TieBreak parse_tie_break(std::string_view text);

struct StrategyConfig {
  Strategy strategy = Strategy::sup;
  double tau = 0.1;     // minimum similarity for SIM and SUP_SIM pairs
  double lambda = 0.5;  // SUP_SIM weight on pair-mean superiority
  TieBreak tie_break = TieBreak::lexicographic;
  // SUP only: pair the two globally best profiled models instead of the two
  // best among each instruction's candidates.
  bool global_top2 = false;

  // Throws ConfigError when tau is outside [-1, 1] or lambda outside [0, 1].
  void validate() const;
};

// Name -> profile lookup over a consistent (profiles, similarity) pair.
class BehaviorIndex {
 public:
  // Throws DimensionError if the matrix models differ from the profiles.
  BehaviorIndex(std::vector<AbilityProfile> profiles, SimilarityMatrix similarity);
  explicit BehaviorIndex(const ProfileSet& set);

  std::size_t size() const { return profiles_.size(); }
  const AbilityProfile& profile(std::size_t i) const { return profiles_[i]; }
  const std::string& model(std::size_t i) const { return profiles_[i].model; }
  double mb_sup(std::size_t i) const { return profiles_[i].mb_sup; }
  double sim(std::size_t i, std::size_t j) const { return similarity_.at(i, j); }

  std::optional<std::size_t> find(std::string_view model) const;
  // Throws LookupError naming the model.
  std::size_t lookup(std::string_view model) const;

  // Whole-pool ranking by (mb_sup desc, name asc).
  const std::vector<std::size_t>& global_ranking() const { return ranking_; }

 private:
  std::vector<AbilityProfile> profiles_;
  SimilarityMatrix similarity_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::vector<std::size_t> ranking_;
};

struct Candidate {
  std::string model;
  std::string text;
};

// The models that answered one instruction.
struct CandidateSet {
  std::string instruction_id;
  std::vector<Candidate> available;
};

struct SelectedPair {
  std::string chosen_model;
  std::string rejected_model;
  std::size_t chosen_index = 0;  // positions within CandidateSet::available
  std::size_t rejected_index = 0;
  double mb_sim = 0.0;
  double chosen_sup = 0.0;
  double rejected_sup = 0.0;
  Strategy strategy = Strategy::sup;
  bool tie_resolved = false;  // equal mb_sup, oriented by model name
};

enum class NoPairReason {
  insufficient_candidates,
  below_tau,
  tie_skipped,
  global_pair_unavailable,
};

std::string_view to_string(NoPairReason reason);

struct NoPair {
  NoPairReason reason;
};

using Selection = std::variant<SelectedPair, NoPair>;

// Picks one chosen/rejected pair among the candidates of a single
// instruction.
//  SUP:     the two highest mb_sup candidates; the better one is chosen.
//  SIM:     among pairs with sim >= tau, the most similar pair.
//  SUP_SIM: among pairs with sim >= tau, the pair maximizing
//           lambda * (sup_a + sup_b) / 2 + (1 - lambda) * sim.
// Equal scores are resolved by the pair's sorted model names (smallest
// first); equal mb_sup within the pair by tie_break.
// Throws LookupError for unprofiled models, ValidationError for a model
// that appears twice.
Selection select_pair(const CandidateSet& candidates, const BehaviorIndex& index,
                      const StrategyConfig& config);

struct ReportEntry {
  std::string instruction_id;
  std::string message;
};

// Counters for one binarization run. merge() is associative, so partial
// reports from independent batches combine in any grouping.
struct SelectionReport {
  std::size_t instructions = 0;
  std::size_t pairs_emitted = 0;
  std::size_t degenerate_text = 0;
  std::size_t tie_resolved = 0;
  std::map<std::string, std::size_t> no_pair;  // reason -> count
  std::vector<ReportEntry> errors;             // input order
  FrequencyTable frequencies;

  void merge(const SelectionReport& other);
  ordered_json to_json() const;
};

struct BinarizeOptions {
  // Abort on the first per-instruction error instead of recording it.
  bool strict = false;
  // Responses from these models are dropped before selection.
  std::vector<std::string> excluded_models;
  // Worker threads for pair selection; 0 picks hardware concurrency.
  // Output order does not depend on this.
  unsigned threads = 1;
  std::size_t batch_size = 4096;
};

using RecordSource = std::function<std::optional<InstructionRecord>()>;
using PairSink = std::function<void(const PreferencePair&)>;

// Turns one pool record into a pair, updating `report`. Returns nullopt when
// the instruction yields no pair. Lookup/validation errors are recorded in
// the report unless options.strict, in which case they propagate.
std::optional<PreferencePair> binarize_record(const InstructionRecord& record,
                                              const BehaviorIndex& index,
                                              const StrategyConfig& config,
                                              const BinarizeOptions& options,
                                              SelectionReport& report);

// Streams records from `next` until it returns nullopt and hands every
// emitted pair to `emit` in input order.
SelectionReport binarize_pool(const RecordSource& next, const BehaviorIndex& index,
                              const StrategyConfig& config, const PairSink& emit,
                              const BinarizeOptions& options = {});

// Convenience for in-memory pools.
std::vector<PreferencePair> binarize_pool(const std::vector<InstructionRecord>& pool,
                                          const BehaviorIndex& index,
                                          const StrategyConfig& config,
                                          SelectionReport& report,
                                          const BinarizeOptions& options = {});

}  // namespace zebra
