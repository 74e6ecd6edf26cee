#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace gw {

inline constexpr const char* kVersion = "0.1.0";

/// Content-addressed JSON cache: one file per key under a directory, file
/// names are hashes of the full key string. Keys embed the code version and
/// convention flags, so stale entries are never served across versions.
class Cache {
public:
  explicit Cache(std::filesystem::path dir);

  /// Directory from GW_CACHE, default ".gw-cache".
  static std::filesystem::path default_dir();

  std::optional<nlohmann::json> get(const std::string& key);
  void put(const std::string& key, const nlohmann::json& value);

  /// Drop entries whose recorded version differs (or everything with `all`).
  std::size_t gc(bool all);

  const std::filesystem::path& dir() const { return dir_; }

  struct Stats {
    std::size_t hits = 0, misses = 0, puts = 0, corrupt = 0;
  };
  const Stats& stats() const { return stats_; }

  static std::string key_hash(const std::string& key);

private:
  std::filesystem::path path_for(const std::string& key) const;

  std::filesystem::path dir_;
  Stats stats_;
};

}  // namespace gw
