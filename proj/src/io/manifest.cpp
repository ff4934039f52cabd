#include "eqtest/io/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "eqtest/core/errors.hpp"
#include "eqtest/io/csv.hpp"

namespace eqt::io {

namespace {

struct DigestContext {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};

  DigestContext() {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
      throw InternalError("SHA-256 initialisation failed");
  }
  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx.get(), data, size) != 1) throw InternalError("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) throw InternalError("SHA-256 final failed");
    std::string out;
    static constexpr char kHex[] = "0123456789abcdef";
    for (unsigned int k = 0; k < length; ++k) {
      out += kHex[digest[k] >> 4];
      out += kHex[digest[k] & 0xF];
    }
    return out;
  }
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  DigestContext d;
  d.update(bytes.data(), bytes.size());
  return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  DigestContext d;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

std::string iso_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

RunManifest::RunManifest(std::string subcommand, std::uint64_t seed)
    : subcommand_(std::move(subcommand)), seed_(seed), started_(iso_timestamp_now()) {}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs_.emplace_back(path.string(), sha256_file(path));
}

void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path.string()); }

std::filesystem::path RunManifest::finish(const std::filesystem::path& dir) {
  finished_ = iso_timestamp_now();
  const std::filesystem::path path = dir / "manifest.json";
  write_text(path, to_json().dump(2) + "\n");
  return path;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& [path, digest] : inputs_) inputs.push_back({{"path", path}, {"sha256", digest}});
  return {{"subcommand", subcommand_},
          {"seed", seed_},
          {"config", config_},
          {"started", started_},
          {"finished", finished_},
          {"inputs", inputs},
          {"outputs", outputs_},
          {"tool_version", EQTEST_VERSION}};
}

}  // namespace eqt::io
