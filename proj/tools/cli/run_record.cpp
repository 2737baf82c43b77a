#include "cli/run_record.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "zebra/error.hpp"

namespace zebra::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input '" + path.string() + "'");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

RunRecord::RunRecord(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)) {}

void RunRecord::add_input(const std::filesystem::path& path) {
  ordered_json entry = ordered_json::object();
  entry["path"] = path.string();
  entry["sha256"] = sha256_file(path);
  inputs_.push_back(std::move(entry));
}

void RunRecord::add_output(const std::filesystem::path& path) {
  outputs_.push_back(path.string());
}

ordered_json RunRecord::to_json() const {
  ordered_json doc = ordered_json::object();
  doc["tool"] = "zebra";
  doc["command"] = command_;
  doc["argv"] = argv_;
  doc["config"] = config_;
  doc["inputs"] = inputs_;
  doc["outputs"] = outputs_;
  return doc;
}

void RunRecord::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write run record '" + path.string() + "'");
  out << dump_pretty(to_json()) << '\n';
}

}  // namespace zebra::cli
