#include "cli/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli/results.hpp"

namespace steinlab::cli {

std::filesystem::path default_cache_dir() {
  if (const char* d = std::getenv("STEINLAB_CACHE_DIR"); d && *d) return d;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "steinlab";
  }
  return ".steinlab-cache";
}

std::filesystem::path ResultCache::entry_path(std::uint64_t hash) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(hash));
  return dir_ / name;
}

std::optional<Artifacts> ResultCache::load(std::uint64_t hash,
                                           const std::string& canonical_config) const {
  std::ifstream is(entry_path(hash), std::ios::binary);
  if (!is) return std::nullopt;
  std::stringstream buf;
  buf << is.rdbuf();
  const auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("config", "") != canonical_config) {
    return std::nullopt;
  }
  Artifacts a;
  a.main = j.value("main", "");
  a.summary = j.value("summary", "");
  if (j.contains("sidecar") && j["sidecar"].is_string()) a.sidecar = j["sidecar"].get<std::string>();
  return a;
}

void ResultCache::store(std::uint64_t hash, const std::string& canonical_config,
                        const Artifacts& a) const {
  nlohmann::json j;
  j["config"] = canonical_config;
  j["main"] = a.main;
  j["summary"] = a.summary;
  if (a.sidecar) j["sidecar"] = *a.sidecar;
  write_file_atomic(entry_path(hash), j.dump());
}

}  // namespace steinlab::cli
