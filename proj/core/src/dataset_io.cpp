#include "zebra/dataset_io.hpp"

#include <set>
#include <system_error>

#include "zebra/error.hpp"

namespace zebra {

namespace {

ValidationError invalid(std::size_t line, const std::string& message) {
  return ValidationError("line " + std::to_string(line) + ": " + message);
}

const nlohmann::json& member(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw invalid(line, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_member(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto& v = member(obj, key, line);
  if (!v.is_string()) throw invalid(line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

InstructionRecord parse_pool_record(const std::string& text, std::size_t line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), line);
  }
  if (!doc.is_object()) throw invalid(line, "pool record must be a JSON object");

  InstructionRecord rec;
  rec.instruction_id = string_member(doc, "instruction_id", line);
  if (rec.instruction_id.empty()) throw invalid(line, "empty instruction_id");
  rec.instruction = string_member(doc, "instruction", line);

  const auto& responses = member(doc, "responses", line);
  if (!responses.is_array() || responses.empty()) {
    throw invalid(line, "'responses' must be a non-empty array");
  }
  std::set<std::string> models;
  for (const auto& r : responses) {
    if (!r.is_object()) throw invalid(line, "response entries must be objects");
    Response resp{string_member(r, "model", line), string_member(r, "text", line)};
    if (resp.model.empty()) throw invalid(line, "empty model name in responses");
    if (!models.insert(resp.model).second) {
      throw invalid(line, "duplicate model '" + resp.model + "' in responses of '" +
                              rec.instruction_id + "'");
    }
    rec.responses.push_back(std::move(resp));
  }
  return rec;
}

ordered_json to_json(const InstructionRecord& record) {
  ordered_json doc = ordered_json::object();
  doc["instruction_id"] = record.instruction_id;
  doc["instruction"] = record.instruction;
  ordered_json responses = ordered_json::array();
  for (const auto& r : record.responses) {
    responses.push_back(ordered_json{{"model", r.model}, {"text", r.text}});
  }
  doc["responses"] = std::move(responses);
  return doc;
}

PoolReader::PoolReader(std::istream& in) : in_(&in) {}

PoolReader::PoolReader(const std::filesystem::path& path)
    : file_(path, std::ios::binary), in_(&file_) {
  if (!file_) throw IoError("cannot open pool '" + path.string() + "'");
}

std::optional<InstructionRecord> PoolReader::next() {
  std::string text;
  while (std::getline(*in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    auto rec = parse_pool_record(text, line_);
    if (!seen_ids_.insert(rec.instruction_id).second) {
      throw invalid(line_, "duplicate instruction_id '" + rec.instruction_id + "'");
    }
    return rec;
  }
  if (in_->bad()) throw IoError("read failure after line " + std::to_string(line_));
  return std::nullopt;
}

std::vector<InstructionRecord> read_pool(const std::filesystem::path& path) {
  PoolReader reader(path);
  std::vector<InstructionRecord> out;
  while (auto rec = reader.next()) out.push_back(std::move(*rec));
  return out;
}

void validate_pair(const PreferencePair& pair) {
  if (pair.chosen.model == pair.rejected.model) {
    throw ValidationError("pair '" + pair.instruction_id + "' chooses and rejects the same model");
  }
  if (!(pair.chosen.mb_sup >= pair.rejected.mb_sup)) {
    throw ValidationError("pair '" + pair.instruction_id + "' has chosen mb_sup below rejected");
  }
}

ordered_json to_json(const PreferencePair& pair) {
  auto side = [](const PairSide& s) {
    ordered_json o = ordered_json::object();
    o["model"] = s.model;
    o["text"] = s.text;
    o["mb_sup"] = s.mb_sup;
    return o;
  };
  ordered_json doc = ordered_json::object();
  doc["instruction_id"] = pair.instruction_id;
  doc["instruction"] = pair.instruction;
  doc["chosen"] = side(pair.chosen);
  doc["rejected"] = side(pair.rejected);
  doc["mb_sim"] = pair.mb_sim;
  doc["strategy"] = pair.strategy;
  doc["flags"] = pair.flags;
  return doc;
}

PreferencePair pair_from_json(const nlohmann::json& doc) {
  try {
    auto side = [](const nlohmann::json& o) {
      return PairSide{o.at("model").get<std::string>(), o.at("text").get<std::string>(),
                      o.at("mb_sup").get<double>()};
    };
    PreferencePair pair;
    pair.instruction_id = doc.at("instruction_id").get<std::string>();
    pair.instruction = doc.at("instruction").get<std::string>();
    pair.chosen = side(doc.at("chosen"));
    pair.rejected = side(doc.at("rejected"));
    pair.mb_sim = doc.at("mb_sim").get<double>();
    pair.strategy = doc.at("strategy").get<std::string>();
    pair.flags = doc.at("flags").get<std::vector<std::string>>();
    return pair;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed pair: ") + e.what());
  }
}

void write_pair_line(std::ostream& out, const PreferencePair& pair) {
  validate_pair(pair);
  out << dump_canonical(to_json(pair)) << '\n';
}

PairWriter::PairWriter(std::filesystem::path path)
    : path_(std::move(path)), partial_(path_.string() + ".partial") {
  out_.open(partial_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open '" + partial_.string() + "' for writing");
}

PairWriter::~PairWriter() {
  if (!done_) abandon();
}

void PairWriter::abandon() noexcept {
  done_ = true;
  out_.close();
  std::error_code ec;
  std::filesystem::remove(partial_, ec);
}

void PairWriter::write(const PreferencePair& pair) {
  if (done_) throw IoError("write after commit to '" + path_.string() + "'");
  write_pair_line(out_, pair);
  if (!out_) {
    abandon();
    throw IoError("write failed for '" + partial_.string() + "'");
  }
  ++count_;
}

void PairWriter::commit() {
  if (done_) return;
  out_.flush();
  out_.close();
  if (out_.fail()) {
    abandon();
    throw IoError("flush failed for '" + partial_.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(partial_, path_, ec);
  if (ec) {
    abandon();
    throw IoError("cannot move output into place at '" + path_.string() + "': " + ec.message());
  }
  done_ = true;
}

void write_pairs(const std::vector<PreferencePair>& pairs, const std::filesystem::path& path) {
  PairWriter writer(path);
  for (const auto& p : pairs) writer.write(p);
  writer.commit();
}

std::vector<PreferencePair> read_pairs(std::istream& in) {
  std::vector<PreferencePair> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    try {
      out.push_back(pair_from_json(nlohmann::json::parse(text)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), line);
    }
  }
  return out;
}

std::vector<PreferencePair> read_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pairs '" + path.string() + "'");
  return read_pairs(in);
}

}  // namespace zebra
