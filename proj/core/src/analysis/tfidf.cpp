#include "zebra/analysis/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "zebra/error.hpp"

namespace zebra::analysis {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TermCounts term_counts(std::string_view text) {
  TermCounts counts;
  for (auto& t : tokenize(text)) ++counts[std::move(t)];
  return counts;
}

void DocumentFrequencies::add_document(std::string_view text) { add_document(term_counts(text)); }

void DocumentFrequencies::add_document(const TermCounts& counts) {
  ++documents_;
  for (const auto& [term, n] : counts) ++df_[term];
}

std::size_t DocumentFrequencies::df(const std::string& term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

double DocumentFrequencies::idf(const std::string& term) const {
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + static_cast<double>(df(term)))) +
         1.0;
}

double tfidf_cosine(const TermCounts& a, const TermCounts& b, const DocumentFrequencies& corpus) {
  // Sorted term order keeps the floating-point sums reproducible.
  std::map<std::string_view, double> wa, wb;
  for (const auto& [t, n] : a) wa[t] = static_cast<double>(n) * corpus.idf(t);
  for (const auto& [t, n] : b) wb[t] = static_cast<double>(n) * corpus.idf(t);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, w] : wa) {
    na += w * w;
    if (auto it = wb.find(t); it != wb.end()) dot += w * it->second;
  }
  for (const auto& [t, w] : wb) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

std::vector<TfidfAuditResult> tfidf_audit(
    const RecordSource& next, const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::set<std::string> audited;
  for (const auto& [a, b] : pairs) {
    audited.insert(a);
    audited.insert(b);
  }
  DocumentFrequencies corpus;
  // per instruction (in pool order): model -> counts, audited models only
  std::vector<std::map<std::string, TermCounts>> kept;
  while (auto rec = next()) {
    std::map<std::string, TermCounts> mine;
    for (const auto& r : rec->responses) {
      TermCounts counts = term_counts(r.text);
      corpus.add_document(counts);
      if (audited.count(r.model)) mine.emplace(r.model, std::move(counts));
    }
    if (mine.size() >= 2) kept.push_back(std::move(mine));
  }

  std::vector<TfidfAuditResult> out;
  for (const auto& [a, b] : pairs) {
    TfidfAuditResult res{a, b, 0.0, 0};
    double sum = 0.0;
    for (const auto& inst : kept) {
      auto ia = inst.find(a);
      auto ib = inst.find(b);
      if (ia == inst.end() || ib == inst.end()) continue;
      sum += tfidf_cosine(ia->second, ib->second, corpus);
      ++res.n_instructions;
    }
    if (res.n_instructions == 0) {
      throw AuditError("models '" + a + "' and '" + b + "' share no instruction");
    }
    res.mean_pair_similarity = sum / static_cast<double>(res.n_instructions);
    out.push_back(std::move(res));
  }
  return out;
}

TfidfAuditResult tfidf_audit(const std::vector<InstructionRecord>& pool, const std::string& model_a,
                             const std::string& model_b) {
  std::size_t pos = 0;
  RecordSource next = [&]() -> std::optional<InstructionRecord> {
    if (pos == pool.size()) return std::nullopt;
    return pool[pos++];
  };
  return tfidf_audit(next, {{model_a, model_b}}).front();
}

ordered_json to_json(const TfidfAuditResult& result) {
  ordered_json doc = ordered_json::object();
  doc["pair"] = {result.model_a, result.model_b};
  doc["mean_pair_similarity"] = result.mean_pair_similarity;
  doc["n_instructions"] = result.n_instructions;
  return doc;
}

}  // namespace zebra::analysis
