#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "cli/experiments.hpp"

namespace steinlab::cli {

/// $STEINLAB_CACHE_DIR, else $HOME/.cache/steinlab, else ./.steinlab-cache.
std::filesystem::path default_cache_dir();

/// One JSON file per config hash holding the rendered artifacts.  The
/// canonical config is stored alongside and compared on load, so a hash
/// collision reads as a miss.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path entry_path(std::uint64_t hash) const;

  std::optional<Artifacts> load(std::uint64_t hash, const std::string& canonical_config) const;
  void store(std::uint64_t hash, const std::string& canonical_config, const Artifacts& a) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace steinlab::cli
