#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zebra/json_format.hpp"
#include "zebra/records.hpp"
#include "zebra/selection.hpp"

namespace zebra::analysis {

// Lowercases ASCII letters and splits on runs of characters that are not
// ASCII alphanumerics. Bytes >= 0x80 count as word characters so UTF-8
// words stay whole.
std::vector<std::string> tokenize(std::string_view text);

using TermCounts = std::unordered_map<std::string, std::size_t>;

TermCounts term_counts(std::string_view text);

// Document frequencies over a corpus where every response is one document.
class DocumentFrequencies {
 public:
  void add_document(std::string_view text);
  void add_document(const TermCounts& counts);

  std::size_t documents() const { return documents_; }
  std::size_t df(const std::string& term) const;
  // ln((1 + N) / (1 + df)) + 1
  double idf(const std::string& term) const;

 private:
  std::unordered_map<std::string, std::size_t> df_;
  std::size_t documents_ = 0;
};

// Cosine of the raw-count TF x smoothed-IDF vectors of two documents.
// 0 when either document has no tokens.
double tfidf_cosine(const TermCounts& a, const TermCounts& b, const DocumentFrequencies& corpus);

struct TfidfAuditResult {
  std::string model_a;
  std::string model_b;
  double mean_pair_similarity = 0.0;
  std::size_t n_instructions = 0;
};

// Mean per-instruction TF-IDF cosine between the two models' responses over
// the instructions both answered. IDF is computed over every response in
// the pool. One pass over `next`; only the audited models' responses are
// retained. Throws AuditError when the models share no instruction.
std::vector<TfidfAuditResult> tfidf_audit(
    const RecordSource& next, const std::vector<std::pair<std::string, std::string>>& pairs);

TfidfAuditResult tfidf_audit(const std::vector<InstructionRecord>& pool, const std::string& model_a,
                             const std::string& model_b);

ordered_json to_json(const TfidfAuditResult& result);

}  // namespace zebra::analysis
