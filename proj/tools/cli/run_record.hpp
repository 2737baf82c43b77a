#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zebra/json_format.hpp"

namespace zebra::cli {

// Lowercase hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

// Sidecar describing one invocation: argv, resolved configuration and
// digests of every input, enough to rerun it.
class RunRecord {
 public:
  RunRecord(std::string command, std::vector<std::string> argv);

  ordered_json& config() { return config_; }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  ordered_json config_ = ordered_json::object();
  ordered_json inputs_ = ordered_json::array();
  ordered_json outputs_ = ordered_json::array();
};

}  // namespace zebra::cli
