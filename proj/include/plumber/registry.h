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

#ifndef PLUMBER_REGISTRY_H_
#define PLUMBER_REGISTRY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace plumber {

enum class TaskKind {
  kCoref,
  kTripleExtraction,
  kEntityLinking,
  kRelationLinking,
  kJointLinking,
};

// Wire names: "coref", "triple_extraction", "entity_linking", ...
std::string_view task_name(TaskKind task);
std::optional<TaskKind> parse_task(std::string_view name);
bool is_linking_task(TaskKind task);

bool is_valid_kg_tag(std::string_view tag);
bool is_valid_component_id(std::string_view id);

struct ComponentTarget {
  enum class Kind { kNative, kRemote };
  Kind kind = Kind::kNative;
  std::string ref;  // builtin key for native, endpoint URL for remote

  friend bool operator==(const ComponentTarget&,
                         const ComponentTarget&) = default;
};

struct ComponentDescriptor {
  std::string id;
  std::string name;
  TaskKind task = TaskKind::kCoref;
  std::set<std::string> kgs;
  ComponentTarget target;
  std::string version;
  std::optional<std::int64_t> timeout_ms;  // overrides the adapter default

  bool is_remote() const {
    return target.kind == ComponentTarget::Kind::kRemote;
  }
  friend bool operator==(const ComponentDescriptor&,
                         const ComponentDescriptor&) = default;
};

// Throws kInvalidDescriptor naming the failed invariant.
void validate_descriptor(const ComponentDescriptor& desc);

struct Pipeline {
  std::string id;  // "coref+extractor+linkA[+linkB]@kg"
  std::string coref;
  std::string extractor;
  // One joint linker, or entity linker followed by relation linker.
  std::vector<std::string> linking;
  std::string kg;

  bool joint() const { return linking.size() == 1; }
  std::size_t stage_count() const { return 2 + linking.size(); }
  friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

std::string make_pipeline_id(std::string_view coref, std::string_view extractor,
                             const std::vector<std::string>& linking,
                             std::string_view kg);

struct PipelineSelection {
  std::string coref;
  std::string extractor;
  std::vector<std::string> linking;
  std::string kg;
};

// Splits a pipeline id back into its component ids. Throws kInvalidPipeline
// when the id is not of the canonical shape.
PipelineSelection parse_pipeline_id(std::string_view id);

struct KgLinkerCounts {
  std::size_t entity = 0;
  std::size_t relation = 0;
  std::size_t joint = 0;
  friend bool operator==(const KgLinkerCounts&, const KgLinkerCounts&) = default;
};

struct PoolStats {
  std::size_t coref = 0;
  std::size_t extractors = 0;
  std::map<std::string, KgLinkerCounts> per_kg;
  std::size_t total = 0;

  // c * t * sum_k (e_k * r_k + j_k)
  std::size_t formula_total() const;
};

struct PipelinePool {
  std::vector<Pipeline> pipelines;  // sorted by id
  PoolStats stats;
};

// The component repository. Reads may run concurrently; registrations take
// an exclusive lock and invalidate the cached pool, which is rebuilt on the
// next enumeration.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  std::string register_component(ComponentDescriptor desc);

  std::optional<ComponentDescriptor> find(std::string_view id) const;
  // Throws kUnknownComponent.
  ComponentDescriptor get(std::string_view id) const;

  std::vector<ComponentDescriptor> list_components(
      std::optional<TaskKind> task = std::nullopt,
      std::optional<std::string> kg = std::nullopt) const;

  std::size_t size() const;

  // Throws kIncompletePool naming the missing task.
  std::shared_ptr<const PipelinePool> enumerate_pipelines() const;

  Pipeline validate_manual_selection(std::string_view coref_id,
                                     std::string_view extractor_id,
                                     const std::vector<std::string>& linking_ids,
                                     std::string_view kg) const;

  // Re-checks a pipeline's invariants against the current registry contents.
  Pipeline validate(const Pipeline& pipeline) const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, ComponentDescriptor, std::less<>> components_;
  mutable std::shared_ptr<const PipelinePool> pool_;
};

// Bootstrap file: JSON array of descriptor objects.
std::vector<ComponentDescriptor> load_components_file(
    const std::filesystem::path& path);
void load_components_into(Registry& registry, const std::filesystem::path& path);

}  // namespace plumber

#endif  // PLUMBER_REGISTRY_H_
