#include "gw/cache.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace gw {

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path Cache::default_dir() {
  if (const char* env = std::getenv("GW_CACHE"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::path(".gw-cache");
}

std::string Cache::key_hash(const std::string& key) {
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path Cache::path_for(const std::string& key) const {
  return dir_ / (key_hash(key) + ".json");
}

std::optional<nlohmann::json> Cache::get(const std::string& key) {
  auto path = path_for(key);
  std::ifstream in(path);
  if (!in) {
    ++stats_.misses;
    return std::nullopt;
  }
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("key").get<std::string>() != key ||
        j.at("version").get<std::string>() != kVersion) {
      ++stats_.misses;
      return std::nullopt;
    }
    ++stats_.hits;
    return j.at("value");
  } catch (const std::exception& e) {
    ++stats_.corrupt;
    ++stats_.misses;
    std::cerr << "warning: corrupt cache entry " << path.string()
              << " (" << e.what() << "); recomputing\n";
    return std::nullopt;
  }
}

void Cache::put(const std::string& key, const nlohmann::json& value) {
  auto path = path_for(key);
  auto lock = path;
  lock += ".lock";

  int fd = -1;
  for (int attempt = 0; attempt < 200; ++attempt) {
    fd = ::open(lock.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  if (fd < 0) return;  // another writer holds the key; its value will match
  ::close(fd);

  nlohmann::json j{{"key", key}, {"version", kVersion}, {"value", value}};
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
  std::filesystem::remove(lock);
  ++stats_.puts;
}

std::size_t Cache::gc(bool all) {
  std::size_t removed = 0;
  if (!std::filesystem::exists(dir_)) return 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() != ".json") continue;
    bool drop = all;
    if (!drop) {
      std::ifstream in(entry.path());
      try {
        nlohmann::json j = nlohmann::json::parse(in);
        drop = j.at("version").get<std::string>() != kVersion;
      } catch (const std::exception&) {
        drop = true;
      }
    }
    if (drop) {
      std::filesystem::remove(entry.path());
      ++removed;
    }
  }
  return removed;
}

}  // namespace gw
