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

#include "plumber/registry.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <mutex>

#include "plumber/error.h"
#include "plumber/json_codec.h"

namespace plumber {

namespace {

constexpr std::array<std::pair<TaskKind, std::string_view>, 5> kTaskNames = {{
    {TaskKind::kCoref, "coref"},
    {TaskKind::kTripleExtraction, "triple_extraction"},
    {TaskKind::kEntityLinking, "entity_linking"},
    {TaskKind::kRelationLinking, "relation_linking"},
    {TaskKind::kJointLinking, "joint_linking"},
}};

void CheckTask(const std::map<std::string, ComponentDescriptor, std::less<>>& components,
               std::string_view id, TaskKind expected) {
  auto it = components.find(id);
  if (it == components.end()) {
    throw Error(ErrorCode::kUnknownComponent,
                "unknown component '" + std::string(id) + "'", std::string(id));
  }
  if (it->second.task != expected) {
    throw Error(ErrorCode::kTaskMismatch,
                "component '" + std::string(id) + "' has task " +
                    std::string(task_name(it->second.task)) + ", expected " +
                    std::string(task_name(expected)),
                std::string(id));
  }
}

void CheckKg(const std::map<std::string, ComponentDescriptor, std::less<>>& components,
             std::string_view id, std::string_view kg) {
  const auto& desc = components.find(id)->second;
  if (!desc.kgs.contains(std::string(kg))) {
    throw Error(ErrorCode::kKgMismatch,
                "component '" + std::string(id) + "' does not support KG '" +
                    std::string(kg) + "'",
                std::string(id));
  }
}

}  // namespace

std::string_view task_name(TaskKind task) {
  for (const auto& [kind, name] : kTaskNames) {
    if (kind == task) return name;
  }
  return "unknown";
}

std::optional<TaskKind> parse_task(std::string_view name) {
  for (const auto& [kind, n] : kTaskNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

bool is_linking_task(TaskKind task) {
  return task == TaskKind::kEntityLinking ||
         task == TaskKind::kRelationLinking || task == TaskKind::kJointLinking;
}

bool is_valid_kg_tag(std::string_view tag) {
  return !tag.empty() && std::all_of(tag.begin(), tag.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

bool is_valid_component_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

void validate_descriptor(const ComponentDescriptor& desc) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kInvalidDescriptor,
                "descriptor '" + desc.id + "': " + what, desc.id);
  };
  if (!is_valid_component_id(desc.id)) fail("id must match [a-z0-9-]+");
  for (const auto& kg : desc.kgs) {
    if (!is_valid_kg_tag(kg)) fail("KG tag '" + kg + "' must match [a-z0-9_]+");
  }
  if (is_linking_task(desc.task) && desc.kgs.empty()) {
    fail("linking components must declare at least one KG");
  }
  if (!is_linking_task(desc.task) && !desc.kgs.empty()) {
    fail("coref and extraction components must not declare KGs");
  }
  if (desc.target.ref.empty()) fail("target ref is empty");
  if (desc.timeout_ms && *desc.timeout_ms <= 0) fail("timeout_ms must be positive");
}

std::string make_pipeline_id(std::string_view coref, std::string_view extractor,
                             const std::vector<std::string>& linking,
                             std::string_view kg) {
  std::string id;
  id.append(coref).append("+").append(extractor);
  for (const auto& l : linking) id.append("+").append(l);
  id.append("@").append(kg);
  return id;
}

PipelineSelection parse_pipeline_id(std::string_view id) {
  auto bad = [&] {
    return Error(ErrorCode::kInvalidPipeline,
                 "malformed pipeline id '" + std::string(id) + "'",
                 std::string(id));
  };
  auto at = id.rfind('@');
  if (at == std::string_view::npos) throw bad();
  PipelineSelection sel;
  sel.kg = std::string(id.substr(at + 1));
  std::vector<std::string> parts;
  std::string_view rest = id.substr(0, at);
  while (true) {
    auto plus = rest.find('+');
    parts.emplace_back(rest.substr(0, plus));
    if (plus == std::string_view::npos) break;
    rest.remove_prefix(plus + 1);
  }
  if (parts.size() < 3 || parts.size() > 4) throw bad();
  for (const auto& p : parts) {
    if (!is_valid_component_id(p)) throw bad();
  }
  if (!is_valid_kg_tag(sel.kg)) throw bad();
  sel.coref = parts[0];
  sel.extractor = parts[1];
  sel.linking.assign(parts.begin() + 2, parts.end());
  return sel;
}

std::size_t PoolStats::formula_total() const {
  std::size_t sum = 0;
  for (const auto& [kg, counts] : per_kg) {
    sum += counts.entity * counts.relation + counts.joint;
  }
  return coref * extractors * sum;
}

std::string Registry::register_component(ComponentDescriptor desc) {
  validate_descriptor(desc);
  std::unique_lock lock(mu_);
  if (components_.contains(desc.id)) {
    throw Error(ErrorCode::kDuplicateId,
                "component '" + desc.id + "' is already registered", desc.id);
  }
  std::string id = desc.id;
  components_.emplace(id, std::move(desc));
  pool_.reset();
  return id;
}

std::optional<ComponentDescriptor> Registry::find(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = components_.find(id);
  if (it == components_.end()) return std::nullopt;
  return it->second;
}

ComponentDescriptor Registry::get(std::string_view id) const {
  auto desc = find(id);
  if (!desc) {
    throw Error(ErrorCode::kUnknownComponent,
                "unknown component '" + std::string(id) + "'", std::string(id));
  }
  return *std::move(desc);
}

std::vector<ComponentDescriptor> Registry::list_components(
    std::optional<TaskKind> task, std::optional<std::string> kg) const {
  std::shared_lock lock(mu_);
  std::vector<ComponentDescriptor> out;
  for (const auto& [id, desc] : components_) {
    if (task && desc.task != *task) continue;
    if (kg && !desc.kgs.contains(*kg)) continue;
    out.push_back(desc);
  }
  return out;
}

std::size_t Registry::size() const {
  std::shared_lock lock(mu_);
  return components_.size();
}

std::shared_ptr<const PipelinePool> Registry::enumerate_pipelines() const {
  {
    std::shared_lock lock(mu_);
    if (pool_) return pool_;
  }
  std::unique_lock lock(mu_);
  if (pool_) return pool_;

  std::vector<const ComponentDescriptor*> corefs, extractors;
  std::map<std::string, std::vector<const ComponentDescriptor*>> entity, relation,
      joint;
  for (const auto& [id, desc] : components_) {
    switch (desc.task) {
      case TaskKind::kCoref:
        corefs.push_back(&desc);
        break;
      case TaskKind::kTripleExtraction:
        extractors.push_back(&desc);
        break;
      case TaskKind::kEntityLinking:
        for (const auto& kg : desc.kgs) entity[kg].push_back(&desc);
        break;
      case TaskKind::kRelationLinking:
        for (const auto& kg : desc.kgs) relation[kg].push_back(&desc);
        break;
      case TaskKind::kJointLinking:
        for (const auto& kg : desc.kgs) joint[kg].push_back(&desc);
        break;
    }
  }

  auto pool = std::make_shared<PipelinePool>();
  PoolStats& stats = pool->stats;
  stats.coref = corefs.size();
  stats.extractors = extractors.size();
  std::set<std::string> kgs;
  for (const auto* m : {&entity, &relation, &joint}) {
    for (const auto& [kg, list] : *m) kgs.insert(kg);
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> linking_options;
  for (const auto& kg : kgs) {
    KgLinkerCounts counts{entity[kg].size(), relation[kg].size(),
                          joint[kg].size()};
    stats.per_kg[kg] = counts;
    for (const auto* el : entity[kg]) {
      for (const auto* rl : relation[kg]) {
        linking_options.push_back({kg, {el->id, rl->id}});
      }
    }
    for (const auto* jl : joint[kg]) linking_options.push_back({kg, {jl->id}});
  }

  if (corefs.empty()) {
    throw Error(ErrorCode::kIncompletePool, "no coref component registered",
                std::string(task_name(TaskKind::kCoref)));
  }
  if (extractors.empty()) {
    throw Error(ErrorCode::kIncompletePool,
                "no triple extraction component registered",
                std::string(task_name(TaskKind::kTripleExtraction)));
  }
  if (linking_options.empty()) {
    throw Error(ErrorCode::kIncompletePool,
                "no complete linking option for any KG", "linking");
  }

  for (const auto* c : corefs) {
    for (const auto* t : extractors) {
      for (const auto& [kg, linking] : linking_options) {
        Pipeline p;
        p.coref = c->id;
        p.extractor = t->id;
        p.linking = linking;
        p.kg = kg;
        p.id = make_pipeline_id(p.coref, p.extractor, p.linking, p.kg);
        pool->pipelines.push_back(std::move(p));
      }
    }
  }
  std::sort(pool->pipelines.begin(), pool->pipelines.end(),
            [](const Pipeline& a, const Pipeline& b) { return a.id < b.id; });
  stats.total = pool->pipelines.size();
  pool_ = pool;
  return pool_;
}

Pipeline Registry::validate_manual_selection(
    std::string_view coref_id, std::string_view extractor_id,
    const std::vector<std::string>& linking_ids, std::string_view kg) const {
  if (!is_valid_kg_tag(kg)) {
    throw Error(ErrorCode::kInvalidPipeline,
                "invalid KG tag '" + std::string(kg) + "'", std::string(kg));
  }
  if (linking_ids.empty() || linking_ids.size() > 2) {
    throw Error(ErrorCode::kInvalidPipeline,
                "linking takes one joint linker or an entity and a relation "
                "linker",
                "linking");
  }
  std::shared_lock lock(mu_);
  CheckTask(components_, coref_id, TaskKind::kCoref);
  CheckTask(components_, extractor_id, TaskKind::kTripleExtraction);
  if (linking_ids.size() == 1) {
    CheckTask(components_, linking_ids[0], TaskKind::kJointLinking);
  } else {
    CheckTask(components_, linking_ids[0], TaskKind::kEntityLinking);
    CheckTask(components_, linking_ids[1], TaskKind::kRelationLinking);
  }
  for (const auto& id : linking_ids) CheckKg(components_, id, kg);

  Pipeline p;
  p.coref = std::string(coref_id);
  p.extractor = std::string(extractor_id);
  p.linking = linking_ids;
  p.kg = std::string(kg);
  p.id = make_pipeline_id(p.coref, p.extractor, p.linking, p.kg);
  return p;
}

Pipeline Registry::validate(const Pipeline& pipeline) const {
  Pipeline checked = validate_manual_selection(
      pipeline.coref, pipeline.extractor, pipeline.linking, pipeline.kg);
  if (!pipeline.id.empty() && checked.id != pipeline.id) {
    throw Error(ErrorCode::kInvalidPipeline,
                "pipeline id does not match its components", pipeline.id);
  }
  return checked;
}

std::vector<ComponentDescriptor> load_components_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid,
                "cannot open components file " + path.string(), path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  nlohmann::json doc = parse_json_document(content);
  if (!doc.is_array()) {
    throw Error(ErrorCode::kParseError,
                "components file must hold a JSON array", path.string());
  }
  std::vector<ComponentDescriptor> out;
  for (const auto& item : doc) out.push_back(descriptor_from_json(item));
  return out;
}

void load_components_into(Registry& registry,
                          const std::filesystem::path& path) {
  for (auto& desc : load_components_file(path)) {
    registry.register_component(std::move(desc));
  }
}

}  // namespace plumber
