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

#include "plumber/kg_snapshot.h"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>

#include "plumber/core_model.h"
#include "plumber/error.h"
#include "plumber/json_codec.h"
#include "plumber/registry.h"

namespace plumber {

namespace {

Error TypeError(const std::string& what) {
  // Semantic type errors have no precise line; report line 0.
  return Error(ErrorCode::kParseError, what, "0");
}

std::vector<KgRecord> ParseRecords(const Json& doc, const char* key,
                                   std::set<std::string>& seen_iris) {
  std::vector<KgRecord> out;
  if (!doc.contains(key)) return out;
  const Json& array = doc[key];
  if (!array.is_array()) throw TypeError(std::string(key) + " must be an array");
  for (const Json& item : array) {
    if (!item.is_object() || !item.contains("iri") || !item["iri"].is_string()) {
      throw TypeError(std::string(key) + " records need a string 'iri'");
    }
    KgRecord rec;
    rec.iri = item["iri"].get<std::string>();
    if (!item.contains("label") || !item["label"].is_string()) {
      throw TypeError("record '" + rec.iri + "' needs a string 'label'");
    }
    rec.label = item["label"].get<std::string>();
    if (item.contains("aliases")) {
      if (!item["aliases"].is_array()) {
        throw TypeError("record '" + rec.iri + "' aliases must be an array");
      }
      for (const Json& a : item["aliases"]) {
        if (!a.is_string()) {
          throw TypeError("record '" + rec.iri + "' aliases must be strings");
        }
        rec.aliases.push_back(a.get<std::string>());
      }
    }
    if (item.contains("prior") && !item["prior"].is_null()) {
      if (!item["prior"].is_number()) {
        throw TypeError("record '" + rec.iri + "' prior must be a number");
      }
      rec.prior = item["prior"].get<double>();
    }

    auto violation = [&](const std::string& what) {
      return Error(ErrorCode::kInvariantViolation,
                   "record '" + rec.iri + "': " + what, rec.iri);
    };
    if (!is_absolute_iri(rec.iri)) throw violation("IRI is not absolute");
    if (!seen_iris.insert(rec.iri).second) throw violation("duplicate IRI");
    if (normalize_surface(rec.label).empty()) throw violation("empty label");
    for (const auto& a : rec.aliases) {
      if (normalize_surface(a).empty()) throw violation("empty alias");
    }
    if (!(rec.prior >= 0.0 && rec.prior <= 1.0)) {
      throw violation("prior outside [0,1]");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

KGSnapshot parse_snapshot(std::string_view json_text) {
  Json doc = parse_json_document(json_text);
  if (!doc.is_object()) throw TypeError("snapshot must be a JSON object");
  if (!doc.contains("kg") || !doc["kg"].is_string()) {
    throw TypeError("snapshot needs a string 'kg'");
  }
  KGSnapshot snap;
  snap.kg = doc["kg"].get<std::string>();
  if (!is_valid_kg_tag(snap.kg)) {
    throw Error(ErrorCode::kInvariantViolation,
                "KG tag '" + snap.kg + "' must match [a-z0-9_]+", snap.kg);
  }
  std::set<std::string> seen;
  snap.entities = ParseRecords(doc, "entities", seen);
  snap.predicates = ParseRecords(doc, "predicates", seen);
  return snap;
}

KGSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid,
                "cannot open snapshot " + path.string(), path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return parse_snapshot(content);
}

void SnapshotStore::add(KGSnapshot snapshot) {
  std::string kg = snapshot.kg;
  auto ptr = std::make_shared<const KGSnapshot>(std::move(snapshot));
  std::unique_lock lock(mu_);
  snapshots_[kg] = std::move(ptr);
}

void SnapshotStore::load_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) return;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) add(load_snapshot(f));
}

std::shared_ptr<const KGSnapshot> SnapshotStore::get(std::string_view kg) const {
  std::shared_lock lock(mu_);
  auto it = snapshots_.find(kg);
  if (it == snapshots_.end()) {
    throw Error(ErrorCode::kSnapshotMissing,
                "no snapshot loaded for KG '" + std::string(kg) + "'",
                std::string(kg));
  }
  return it->second;
}

bool SnapshotStore::contains(std::string_view kg) const {
  std::shared_lock lock(mu_);
  return snapshots_.find(kg) != snapshots_.end();
}

}  // namespace plumber
