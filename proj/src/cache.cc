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

#include "plumber/cache.h"

#include <algorithm>
#include <fstream>

namespace plumber {

namespace fs = std::filesystem;

namespace {

// Versions may contain characters that are awkward in paths.
std::string PathSafe(std::string s) {
  for (char& c : s) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  if (s.empty() || s == "." || s == "..") s = "_" + s;
  return s;
}

}  // namespace

ContentCache::ContentCache(std::uint64_t budget_bytes,
                           std::optional<fs::path> dir)
    : budget_(budget_bytes), dir_(std::move(dir)) {
  if (dir_) LoadDir();
}

std::string ContentCache::Flatten(const CacheKey& key) {
  std::string out = PathSafe(key.component_id);
  out.push_back('\0');
  out += PathSafe(key.version);
  out.push_back('\0');
  out += PathSafe(key.payload_hash);
  return out;
}

fs::path ContentCache::PathFor(const CacheKey& key) const {
  return *dir_ / PathSafe(key.component_id) / PathSafe(key.version) /
         PathSafe(key.payload_hash);
}

std::optional<std::string> ContentCache::lookup(const CacheKey& key) {
  std::lock_guard lock(mu_);
  auto it = index_.find(Flatten(key));
  if (it == index_.end()) return std::nullopt;
  lru_.splice(lru_.end(), lru_, it->second);
  return it->second->bytes;
}

void ContentCache::store(const CacheKey& key, std::string bytes) {
  if (bytes.size() > budget_) return;
  std::lock_guard lock(mu_);
  if (dir_) {
    std::error_code ec;
    fs::path path = PathFor(key);
    fs::create_directories(path.parent_path(), ec);
    if (!ec) {
      fs::path tmp = path;
      tmp += ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      out.close();
      if (out) fs::rename(tmp, path, ec);
    }
  }
  InsertLocked(key, std::move(bytes));
  EvictLocked();
}

void ContentCache::InsertLocked(const CacheKey& key, std::string bytes) {
  const std::string flat = Flatten(key);
  if (auto it = index_.find(flat); it != index_.end()) {
    size_ -= it->second->bytes.size();
    lru_.erase(it->second);
    index_.erase(it);
  }
  size_ += bytes.size();
  lru_.push_back(Entry{key, std::move(bytes)});
  index_[flat] = std::prev(lru_.end());
}

void ContentCache::EvictLocked() {
  while (size_ > budget_ && !lru_.empty()) {
    Entry& victim = lru_.front();
    size_ -= victim.bytes.size();
    if (dir_) {
      std::error_code ec;
      fs::remove(PathFor(victim.key), ec);
    }
    index_.erase(Flatten(victim.key));
    lru_.pop_front();
  }
}

void ContentCache::LoadDir() {
  std::error_code ec;
  if (!fs::is_directory(*dir_, ec)) return;
  struct Found {
    fs::file_time_type mtime;
    CacheKey key;
    fs::path path;
  };
  std::vector<Found> found;
  for (auto it = fs::recursive_directory_iterator(*dir_, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_regular_file() || it->path().extension() == ".tmp") continue;
    fs::path rel = fs::relative(it->path(), *dir_, ec);
    std::vector<std::string> parts;
    for (const auto& p : rel) parts.push_back(p.string());
    if (parts.size() != 3) continue;
    found.push_back({it->last_write_time(), {parts[0], parts[1], parts[2]},
                     it->path()});
  }
  std::sort(found.begin(), found.end(),
            [](const Found& a, const Found& b) { return a.mtime < b.mtime; });
  std::lock_guard lock(mu_);
  for (const auto& f : found) {
    std::ifstream in(f.path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (!in.bad()) InsertLocked(f.key, std::move(bytes));
  }
  EvictLocked();
}

std::vector<CacheKey> ContentCache::keys() const {
  std::lock_guard lock(mu_);
  std::vector<CacheKey> out;
  for (const auto& e : lru_) out.push_back(e.key);
  return out;
}

std::uint64_t ContentCache::size_bytes() const {
  std::lock_guard lock(mu_);
  return size_;
}

}  // namespace plumber
