#include "kida/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace kida {

std::string model_key(const WeierstrassModel& w_min) {
  u64 h = 0xcbf29ce484222325ull;
  for (unsigned char ch : w_min.to_string()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TraceCache::TraceCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<std::filesystem::path> TraceCache::directory_from_env() {
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

std::filesystem::path TraceCache::file_for(const WeierstrassModel& w_min) const {
  return dir_ / (model_key(w_min) + ".traces");
}

namespace {

std::map<u64, i64> read_records(const std::filesystem::path& file, const std::string& model_text) {
  std::map<u64, i64> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      // header names the model; a mismatch means a hash collision
      if (line.rfind("# model ", 0) == 0 && line.substr(8) != model_text) return {};
      continue;
    }
    std::istringstream fields(line);
    u64 l;
    i64 a;
    if (fields >> l >> a) out.emplace(l, a);
  }
  return out;
}

}  // namespace

std::map<u64, i64> TraceCache::load(const WeierstrassModel& w_min) const {
  std::lock_guard lock(mutex_);
  return read_records(file_for(w_min), w_min.to_string());
}

void TraceCache::append(const WeierstrassModel& w_min, const std::map<u64, i64>& records) {
  std::lock_guard lock(mutex_);
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(Errc::io, "cannot create cache directory " + dir_.string() + ": " + ec.message());
  const auto file = file_for(w_min);
  const bool fresh = !std::filesystem::exists(file);
  const auto existing = read_records(file, w_min.to_string());
  std::ofstream out(file, std::ios::app);
  if (!out) throw Error(Errc::io, "cannot write cache file " + file.string());
  if (fresh) out << "# model " << w_min.to_string() << '\n';
  for (const auto& [l, a] : records)
    if (!existing.count(l)) out << l << ' ' << a << '\n';
}

}  // namespace kida
