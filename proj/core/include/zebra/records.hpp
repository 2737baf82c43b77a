#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace zebra {

struct Response {
  std::string model;
  std::string text;

  bool operator==(const Response&) const = default;
};

// One line of a response pool: an instruction and the responses that
// several models produced for it. No scores.
struct InstructionRecord {
  std::string instruction_id;
  std::string instruction;
  std::vector<Response> responses;

  bool operator==(const InstructionRecord&) const = default;
};

struct PairSide {
  std::string model;
  std::string text;
  double mb_sup = 0.0;

  bool operator==(const PairSide&) const = default;
};

// One binarized training example.
struct PreferencePair {
  std::string instruction_id;
  std::string instruction;
  PairSide chosen;
  PairSide rejected;
  double mb_sim = 0.0;
  std::string strategy;
  std::vector<std::string> flags;

  bool operator==(const PreferencePair&) const = default;
};

namespace flags {
inline constexpr const char* degenerate_text = "degenerate_text";
inline constexpr const char* tie_break_lexicographic = "tie_break_lexicographic";
}  // namespace flags

struct ModelFrequency {
  std::size_t chosen = 0;
  std::size_t rejected = 0;

  bool operator==(const ModelFrequency&) const = default;
};

// Keyed by model name; std::map keeps serialization order stable.
using FrequencyTable = std::map<std::string, ModelFrequency>;

}  // namespace zebra
