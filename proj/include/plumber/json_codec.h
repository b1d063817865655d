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

#ifndef PLUMBER_JSON_CODEC_H_
#define PLUMBER_JSON_CODEC_H_

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "plumber/core_model.h"
#include "plumber/registry.h"

namespace plumber {

using Json = nlohmann::json;

// Parses JSON text, mapping syntax errors to kParseError whose subject is the
// 1-based line of the failure.
Json parse_json_document(std::string_view text);

// Compact, sorted-key, UTF-8 serialization.
std::string canonical_dump(const Json& value);

Json descriptor_to_json(const ComponentDescriptor& desc);
ComponentDescriptor descriptor_from_json(const Json& j);

Json pipeline_to_json(const Pipeline& p);
Pipeline pipeline_from_json(const Json& j);

// Storage form shared with the wire protocol: mentions are
// {"surface","start","end"}; linked terms add "iri" (when linked) and
// "confidence".
Json mention_to_json(const Mention& m);
Json text_triple_to_json(const TextTriple& t);
Json linked_term_to_json(const LinkedTerm& t);
Json aligned_triple_to_json(const AlignedTriple& t);

// Lenient readers for trusted storage (run store); wire input goes through
// the strict validators in wire.h instead.
Mention mention_from_json(const Json& j);
LinkedTerm linked_term_from_json(const Json& j, std::string_view kg);
AlignedTriple aligned_triple_from_json(const Json& j, std::string_view kg);

}  // namespace plumber

#endif  // PLUMBER_JSON_CODEC_H_
