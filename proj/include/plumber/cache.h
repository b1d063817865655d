// Copyright 2026 The Plumber Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PLUMBER_CACHE_H_
#define PLUMBER_CACHE_H_

#include <cstdint>
#include <filesystem>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace plumber {

struct CacheKey {
  std::string component_id;
  std::string version;
  std::string payload_hash;

  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

inline constexpr std::uint64_t kDefaultCacheBudgetBytes = 256ull << 20;

// Content-addressed stage-result cache with LRU eviction under a byte budget.
// When a directory is given, entries are mirrored to
// {dir}/{component_id}/{version}/{payload_hash} and survive restarts. I/O
// failures degrade to misses. Identical keys are last-write-wins.
class ContentCache {
 public:
  explicit ContentCache(std::uint64_t budget_bytes = kDefaultCacheBudgetBytes,
                        std::optional<std::filesystem::path> dir = std::nullopt);

  std::optional<std::string> lookup(const CacheKey& key);
  void store(const CacheKey& key, std::string bytes);

  // Keys from least to most recently used.
  std::vector<CacheKey> keys() const;
  std::uint64_t size_bytes() const;
  std::uint64_t budget_bytes() const { return budget_; }

 private:
  struct Entry {
    CacheKey key;
    std::string bytes;
  };
  static std::string Flatten(const CacheKey& key);
  std::filesystem::path PathFor(const CacheKey& key) const;
  void InsertLocked(const CacheKey& key, std::string bytes);
  void EvictLocked();
  void LoadDir();

  const std::uint64_t budget_;
  const std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::list<Entry> lru_;  // front = least recently used
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
  std::uint64_t size_ = 0;
};

}  // namespace plumber

#endif  // PLUMBER_CACHE_H_
