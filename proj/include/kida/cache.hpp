#pragma once

// Flat-file cache of Frobenius traces. One file per curve, named by a hash
// of the minimal model, holding newline-delimited "l a_l" records.

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "kida/curve.hpp"

namespace kida {

/// Environment variable overriding the cache directory.
inline constexpr const char* kCacheDirEnv = "KIDA_CACHE_DIR";

/// Stable 64-bit FNV-1a hash of the model text, in hex.
std::string model_key(const WeierstrassModel& w_min);

class TraceCache {
 public:
  explicit TraceCache(std::filesystem::path dir);

  /// Directory from the environment, if set.
  static std::optional<std::filesystem::path> directory_from_env();

  const std::filesystem::path& directory() const noexcept { return dir_; }
  std::filesystem::path file_for(const WeierstrassModel& w_min) const;

  /// All cached traces for the curve; empty when there is no file.
  std::map<u64, i64> load(const WeierstrassModel& w_min) const;

  /// Append records not already present. Writers are serialised.
  void append(const WeierstrassModel& w_min, const std::map<u64, i64>& records);

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

}  // namespace kida
