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

#ifndef PLUMBER_KG_SNAPSHOT_H_
#define PLUMBER_KG_SNAPSHOT_H_

#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace plumber {

struct KgRecord {
  std::string iri;
  std::string label;
  std::vector<std::string> aliases;
  double prior = 0.0;
};

// Immutable local copy of a knowledge graph's entity and predicate labels.
struct KGSnapshot {
  std::string kg;
  std::vector<KgRecord> entities;
  std::vector<KgRecord> predicates;
};

// Throws kParseError (subject: line) for malformed JSON or wrong field types,
// kInvariantViolation (subject: iri) for duplicate IRIs, relative IRIs,
// empty labels/aliases or priors outside [0,1].
KGSnapshot parse_snapshot(std::string_view json_text);
KGSnapshot load_snapshot(const std::filesystem::path& path);

// Snapshots keyed by KG tag. Snapshots are shared immutably.
class SnapshotStore {
 public:
  void add(KGSnapshot snapshot);
  // Loads every *.json file in `dir`.
  void load_dir(const std::filesystem::path& dir);

  // Throws kSnapshotMissing.
  std::shared_ptr<const KGSnapshot> get(std::string_view kg) const;
  bool contains(std::string_view kg) const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const KGSnapshot>, std::less<>> snapshots_;
};

}  // namespace plumber

#endif  // PLUMBER_KG_SNAPSHOT_H_
