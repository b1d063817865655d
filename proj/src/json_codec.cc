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

#include "plumber/json_codec.h"

#include <algorithm>

#include "plumber/error.h"

namespace plumber {

namespace {

std::size_t LineOf(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + byte, '\n'));
}

const Json& Require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParseError,
                std::string("missing field '") + key + "'", key);
  }
  return j.at(key);
}

std::string RequireString(const Json& j, const char* key) {
  const Json& v = Require(j, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kParseError,
                std::string("field '") + key + "' must be a string", key);
  }
  return v.get<std::string>();
}

}  // namespace

Json parse_json_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = LineOf(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::kParseError,
                "JSON syntax error at line " + std::to_string(line),
                std::to_string(line));
  }
}

std::string canonical_dump(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::strict);
}

Json descriptor_to_json(const ComponentDescriptor& desc) {
  Json j{
      {"id", desc.id},
      {"name", desc.name},
      {"task", task_name(desc.task)},
      {"kgs", desc.kgs},
      {"target",
       {{"kind", desc.is_remote() ? "remote" : "native"},
        {"ref", desc.target.ref}}},
      {"version", desc.version},
  };
  if (desc.timeout_ms) j["timeout_ms"] = *desc.timeout_ms;
  return j;
}

ComponentDescriptor descriptor_from_json(const Json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError, "descriptor must be an object");
  }
  ComponentDescriptor desc;
  desc.id = RequireString(j, "id");
  desc.name = j.contains("name") && j["name"].is_string()
                  ? j["name"].get<std::string>()
                  : desc.id;
  auto task = parse_task(RequireString(j, "task"));
  if (!task) {
    throw Error(ErrorCode::kInvalidDescriptor,
                "descriptor '" + desc.id + "' has an unknown task", desc.id);
  }
  desc.task = *task;
  if (j.contains("kgs")) {
    const Json& kgs = j["kgs"];
    if (!kgs.is_array()) {
      throw Error(ErrorCode::kParseError, "field 'kgs' must be an array", "kgs");
    }
    for (const auto& kg : kgs) {
      if (!kg.is_string()) {
        throw Error(ErrorCode::kParseError, "KG tags must be strings", "kgs");
      }
      desc.kgs.insert(kg.get<std::string>());
    }
  }
  const Json& target = Require(j, "target");
  std::string kind = RequireString(target, "kind");
  if (kind == "native") {
    desc.target.kind = ComponentTarget::Kind::kNative;
  } else if (kind == "remote") {
    desc.target.kind = ComponentTarget::Kind::kRemote;
  } else {
    throw Error(ErrorCode::kInvalidDescriptor,
                "descriptor '" + desc.id + "' has unknown target kind '" + kind +
                    "'",
                desc.id);
  }
  desc.target.ref = RequireString(target, "ref");
  desc.version = j.contains("version") && j["version"].is_string()
                     ? j["version"].get<std::string>()
                     : "0";
  if (j.contains("timeout_ms")) {
    if (!j["timeout_ms"].is_number_integer()) {
      throw Error(ErrorCode::kParseError, "field 'timeout_ms' must be an integer",
                  "timeout_ms");
    }
    desc.timeout_ms = j["timeout_ms"].get<std::int64_t>();
  }
  validate_descriptor(desc);
  return desc;
}

Json pipeline_to_json(const Pipeline& p) {
  return Json{{"id", p.id},
              {"coref", p.coref},
              {"extractor", p.extractor},
              {"linking", p.linking},
              {"kg", p.kg}};
}

Pipeline pipeline_from_json(const Json& j) {
  Pipeline p;
  p.id = RequireString(j, "id");
  p.coref = RequireString(j, "coref");
  p.extractor = RequireString(j, "extractor");
  p.linking = Require(j, "linking").get<std::vector<std::string>>();
  p.kg = RequireString(j, "kg");
  return p;
}

Json mention_to_json(const Mention& m) {
  return Json{{"surface", m.surface}, {"start", m.span.start}, {"end", m.span.end}};
}

Json text_triple_to_json(const TextTriple& t) {
  return Json{{"subject", mention_to_json(t.subject)},
              {"predicate", mention_to_json(t.predicate)},
              {"object", mention_to_json(t.object)}};
}

Json linked_term_to_json(const LinkedTerm& t) {
  Json j = mention_to_json(t.mention);
  j["confidence"] = t.confidence;
  if (t.ref) j["iri"] = t.ref->iri;
  return j;
}

Json aligned_triple_to_json(const AlignedTriple& t) {
  return Json{{"subject", linked_term_to_json(t.subject)},
              {"predicate", linked_term_to_json(t.predicate)},
              {"object", linked_term_to_json(t.object)}};
}

Mention mention_from_json(const Json& j) {
  Mention m;
  m.surface = RequireString(j, "surface");
  m.span.start = Require(j, "start").get<std::size_t>();
  m.span.end = Require(j, "end").get<std::size_t>();
  return m;
}

LinkedTerm linked_term_from_json(const Json& j, std::string_view kg) {
  LinkedTerm t;
  t.mention = mention_from_json(j);
  t.confidence = j.value("confidence", 0.0);
  if (j.contains("iri") && j["iri"].is_string()) {
    t.ref = KGRef{j["iri"].get<std::string>(), std::string(kg)};
  }
  return t;
}

AlignedTriple aligned_triple_from_json(const Json& j, std::string_view kg) {
  return AlignedTriple{linked_term_from_json(Require(j, "subject"), kg),
                       linked_term_from_json(Require(j, "predicate"), kg),
                       linked_term_from_json(Require(j, "object"), kg)};
}

}  // namespace plumber
