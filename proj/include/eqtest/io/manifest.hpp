#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace eqt::io {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

/// UTC time in ISO 8601 with second resolution.
std::string iso_timestamp_now();

/// One per CLI run. Timestamps live here only, so reports stay byte-stable.
class RunManifest {
 public:
  RunManifest(std::string subcommand, std::uint64_t seed);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  /// Stamps the end time and writes manifest.json into `dir`.
  std::filesystem::path finish(const std::filesystem::path& dir);

  nlohmann::json to_json() const;

 private:
  std::string subcommand_;
  std::uint64_t seed_;
  nlohmann::json config_ = nlohmann::json::object();
  std::string started_;
  std::string finished_;
  std::vector<std::pair<std::string, std::string>> inputs_;  // path, digest
  std::vector<std::string> outputs_;
};

}  // namespace eqt::io
