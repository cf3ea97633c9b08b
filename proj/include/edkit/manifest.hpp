#pragma once

// Run manifests: one JSON document written next to every command's output,
// recording what produced it.

#include <array>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "edkit/error.hpp"
#include "edkit/ingest.hpp"

namespace edkit {

inline constexpr const char* kToolVersion = "0.1.0";

/// Hex SHA-256 of a file's bytes.
inline std::string sha256_file(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest initialisation failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), std::size_t(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::map<std::string, std::string> input_digests;  // path -> sha256
  std::map<std::string, std::string> output_digests;
  std::string tool_version = kToolVersion;
  std::string timestamp = utc_timestamp();

  void add_input(const std::filesystem::path& p) { input_digests[p.string()] = sha256_file(p); }
  void add_output(const std::filesystem::path& p) { output_digests[p.string()] = sha256_file(p); }
};

inline std::filesystem::path manifest_path_for(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

inline nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["argv"] = m.argv;
  j["config"] = m.config;
  j["inputs"] = m.input_digests;
  j["outputs"] = m.output_digests;
  j["tool_version"] = m.tool_version;
  j["timestamp"] = m.timestamp;
  return j;
}

inline void write_manifest(const RunManifest& m, const std::filesystem::path& out) {
  auto os = detail::open_out(manifest_path_for(out));
  os << to_json(m).dump(2) << '\n';
  if (!os) throw DataError("write failed: " + manifest_path_for(out).string());
}

inline RunManifest read_manifest(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": malformed manifest: " + e.what());
  }
  RunManifest m;
  m.command = detail::require_string(j, "command", path.string());
  for (const auto& a : detail::require(j, "argv", nlohmann::json::value_t::array, path.string()))
    m.argv.push_back(a.get<std::string>());
  if (j.contains("config")) m.config = j["config"];
  if (j.contains("inputs")) m.input_digests = j["inputs"].get<std::map<std::string, std::string>>();
  if (j.contains("outputs")) m.output_digests = j["outputs"].get<std::map<std::string, std::string>>();
  m.tool_version = j.value("tool_version", std::string());
  m.timestamp = j.value("timestamp", std::string());
  return m;
}

}  // namespace edkit
