#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "zebra/json_format.hpp"
#include "zebra/records.hpp"

namespace zebra {

// Streams InstructionRecords from a JSON Lines pool, one object per line:
//   {"instruction_id": str, "instruction": str,
//    "responses": [{"model": str, "text": str}, ...]}
// Blank lines are skipped. Errors carry the 1-based line number.
class PoolReader {
 public:
  explicit PoolReader(std::istream& in);
  // Throws IoError when the file cannot be opened.
  explicit PoolReader(const std::filesystem::path& path);

  PoolReader(const PoolReader&) = delete;
  PoolReader& operator=(const PoolReader&) = delete;

  // Next record, or nullopt at end of input. Throws ParseError for
  // malformed JSON and ValidationError (with line number in the message)
  // for schema or uniqueness violations.
  std::optional<InstructionRecord> next();

  std::size_t line() const { return line_; }

 private:
  std::ifstream file_;
  std::istream* in_;
  std::size_t line_ = 0;
  std::unordered_set<std::string> seen_ids_;
};

std::vector<InstructionRecord> read_pool(const std::filesystem::path& path);

// Parses one pool line. `line` is used in error messages only.
InstructionRecord parse_pool_record(const std::string& text, std::size_t line);
ordered_json to_json(const InstructionRecord& record);

// Key order: instruction_id, instruction, chosen, rejected, mb_sim,
// strategy, flags; chosen/rejected are {model, text, mb_sup}.
ordered_json to_json(const PreferencePair& pair);
PreferencePair pair_from_json(const nlohmann::json& doc);

// Throws ValidationError when chosen/rejected violate the pair invariants.
void validate_pair(const PreferencePair& pair);

// Writes pairs as JSON Lines into `<path>.partial` and renames it over
// `path` on commit(). If the writer is destroyed without commit(), or any
// write fails, the partial file is removed.
class PairWriter {
 public:
  explicit PairWriter(std::filesystem::path path);
  ~PairWriter();

  PairWriter(const PairWriter&) = delete;
  PairWriter& operator=(const PairWriter&) = delete;

  void write(const PreferencePair& pair);
  void commit();

  std::size_t count() const { return count_; }

 private:
  void abandon() noexcept;

  std::filesystem::path path_;
  std::filesystem::path partial_;
  std::ofstream out_;
  std::size_t count_ = 0;
  bool done_ = false;
};

// Writes every pair and commits.
void write_pairs(const std::vector<PreferencePair>& pairs, const std::filesystem::path& path);

// Serializes one pair line (with trailing newline) into `out`.
void write_pair_line(std::ostream& out, const PreferencePair& pair);

std::vector<PreferencePair> read_pairs(std::istream& in);
std::vector<PreferencePair> read_pairs(const std::filesystem::path& path);

struct ConversionStats {
  std::size_t rows = 0;
  std::size_t records = 0;
  std::size_t skipped_empty = 0;      // rows without any usable completion
  std::size_t dropped_duplicates = 0; // repeated model within one row
};

// Converts the public UltraFeedback export (JSON Lines with "instruction"
// and "completions": [{"model", "response", ...}]) into pool JSONL.
// Annotation fields are ignored. The instruction id comes from
// "instruction_id", "prompt_id" or "id" when present, else "uf-<row>" with
// a zero-based row index.
ConversionStats convert_ultrafeedback(std::istream& in, std::ostream& out);

}  // namespace zebra
