#include "bianchi/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bianchi/fp.hpp"
#include "json.hpp"

namespace bianchi {

namespace fs = std::filesystem;

static std::string key_hash(const std::string& key) {
  std::ostringstream os;
  os << std::hex << fnv1a(key);
  return os.str();
}

std::optional<std::string> DiskCache::load(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  fs::path p = fs::path(dir) / (key_hash(key) + ".json");
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (...) {
    return std::nullopt;
  }
  if (!j.contains("key") || !j.contains("payload") || !j.contains("hash")) return std::nullopt;
  if (j["key"].get<std::string>() != key) return std::nullopt;
  std::string payload = j["payload"].get<std::string>();
  std::ostringstream h;
  h << std::hex << fnv1a(payload);
  if (j["hash"].get<std::string>() != h.str()) return std::nullopt;  // corrupted: recompute
  return payload;
}

void DiskCache::store(const std::string& key, const std::string& payload) const {
  if (!enabled()) return;
  fs::create_directories(dir);
  nlohmann::json j;
  j["key"] = key;
  j["payload"] = payload;
  std::ostringstream h;
  h << std::hex << fnv1a(payload);
  j["hash"] = h.str();
  fs::path final_path = fs::path(dir) / (key_hash(key) + ".json");
  fs::path tmp = final_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump();
  }
  fs::rename(tmp, final_path);
}

}  // namespace bianchi
