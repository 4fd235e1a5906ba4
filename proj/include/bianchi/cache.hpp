#pragma once

#include <optional>
#include <string>

namespace bianchi {

// Content-hashed JSON blobs under a cache directory; writes go through a
// temporary file and an atomic rename.
struct DiskCache {
  std::string dir;
  bool verify_mode = false;

  bool enabled() const { return !dir.empty(); }
  std::optional<std::string> load(const std::string& key) const;
  void store(const std::string& key, const std::string& payload) const;
};

}  // namespace bianchi
