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

#ifndef PLUMBER_WIRE_H_
#define PLUMBER_WIRE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plumber/core_model.h"
#include "plumber/native_components.h"
#include "plumber/registry.h"

namespace plumber {

// Component invocation protocol, version 1.
//
// Request body (POST {endpoint}/invoke):
//   {"version":1,"task":"coref"|...,"text":...,"triples":[...],"kg":...}
// Response body:
//   {"status":"ok","result":{...}} or {"status":"error","message":"..."}
//
// All offsets are Unicode scalar values. Serialization is canonical: keys
// sorted, no whitespace, UTF-8.

inline constexpr int kProtocolVersion = 1;

struct InvocationPayload {
  TaskKind task = TaskKind::kCoref;
  int version = kProtocolVersion;
  std::optional<std::string> text;
  std::optional<std::vector<TextTriple>> triples;
  std::optional<std::string> kg;

  friend bool operator==(const InvocationPayload&,
                         const InvocationPayload&) = default;
};

// Throws kSchemaViolation naming the offending field.
void validate_payload(const InvocationPayload& payload);

std::string serialize_payload(const InvocationPayload& payload);
InvocationPayload parse_payload(std::string_view bytes);

struct CorefResult {
  std::string text;
  std::vector<Substitution> substitutions;
  friend bool operator==(const CorefResult&, const CorefResult&) = default;
};

struct ExtractionResult {
  std::vector<TextTriple> triples;
  friend bool operator==(const ExtractionResult&,
                         const ExtractionResult&) = default;
};

struct LinkingResult {
  std::vector<AlignedTriple> aligned;
  friend bool operator==(const LinkingResult&, const LinkingResult&) = default;
};

using ResultBody = std::variant<CorefResult, ExtractionResult, LinkingResult>;

enum class InvocationStatus { kOk, kError };

struct InvocationResult {
  InvocationStatus status = InvocationStatus::kOk;
  std::optional<ResultBody> result;
  std::optional<std::string> message;
  std::int64_t latency_ms = 0;  // measured by the caller, not serialized

  bool ok() const { return status == InvocationStatus::kOk; }
  static InvocationResult Ok(ResultBody body);
  static InvocationResult Failure(std::string message);
};

// Response body bytes; latency is not part of the wire format.
std::string serialize_result(const InvocationResult& result);

// Validates a response body against the schema of `task`. Linked IRIs are
// tagged with `kg`. Throws kSchemaViolation whose subject is the dotted path
// of the offending field ("status", "result.aligned[0].subject.confidence").
InvocationResult parse_result(std::string_view bytes, TaskKind task,
                              std::string_view kg = {});

struct RemoteOptions {
  std::int64_t connect_timeout_ms = 2'000;
  std::size_t max_concurrent_per_endpoint = 8;
};

inline constexpr std::int64_t kDefaultTimeoutMs = 30'000;

// Issues one POST to desc.target.ref + "/invoke". Connection failures are
// retried exactly once; timeouts and malformed responses are not. Throws
// kTimeout, kConnectionFailed, kSchemaViolation or kComponentError.
InvocationResult invoke_remote(const ComponentDescriptor& desc,
                               const InvocationPayload& payload,
                               std::int64_t timeout_ms,
                               const RemoteOptions& options = {});

}  // namespace plumber

#endif  // PLUMBER_WIRE_H_
