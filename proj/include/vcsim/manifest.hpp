#pragma once
#include <cstdint>
#include <map>
#include <string>

namespace vcsim {

constexpr const char* kToolVersion = "vcsim 1.0.0";

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;         // resolved, sorted by key
  std::map<std::string, std::string> input_digests;  // path -> sha256
  std::string tool_version = kToolVersion;
  uint64_t seed = 0;

  std::string to_json() const;  // canonical, single line
  std::string digest() const;   // sha256 of to_json()
};

std::string sha256_hex(const std::string& data);
std::string file_sha256(const std::string& path);

// "# manifest: ...\n# manifest-sha256: ...\n" + body
std::string with_manifest(const RunManifest& m, const std::string& body);

}  // namespace vcsim
