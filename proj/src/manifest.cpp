#include "vcsim/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "vcsim/error.hpp"

namespace vcsim {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw InvariantError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string file_sha256(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

std::string RunManifest::to_json() const {
  nlohmann::json j;  // object keys come out sorted
  j["command"] = command;
  j["params"] = params;
  j["inputs"] = input_digests;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  return j.dump();
}

std::string RunManifest::digest() const { return sha256_hex(to_json()); }

std::string with_manifest(const RunManifest& m, const std::string& body) {
  return "# manifest: " + m.to_json() + "\n# manifest-sha256: " + m.digest() + "\n" + body;
}

}  // namespace vcsim
