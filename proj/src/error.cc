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

#include "plumber/error.h"

#include <array>

namespace plumber {

namespace {

struct CodeInfo {
  ErrorCode code;
  std::string_view name;
  int status;
};

constexpr std::array kCodes = {
    CodeInfo{ErrorCode::kInvalidRequest, "invalid_request", 400},
    CodeInfo{ErrorCode::kInvalidDocument, "invalid_document", 400},
    CodeInfo{ErrorCode::kDocumentTooLarge, "document_too_large", 413},
    CodeInfo{ErrorCode::kDuplicateId, "duplicate_id", 409},
    CodeInfo{ErrorCode::kInvalidDescriptor, "invalid_descriptor", 400},
    CodeInfo{ErrorCode::kIncompletePool, "incomplete_pool", 409},
    CodeInfo{ErrorCode::kUnknownComponent, "unknown_component", 404},
    CodeInfo{ErrorCode::kTaskMismatch, "task_mismatch", 422},
    CodeInfo{ErrorCode::kKgMismatch, "kg_mismatch", 422},
    CodeInfo{ErrorCode::kInvalidPipeline, "invalid_pipeline", 422},
    CodeInfo{ErrorCode::kParseError, "parse_error", 400},
    CodeInfo{ErrorCode::kInvariantViolation, "invariant_violation", 400},
    CodeInfo{ErrorCode::kSnapshotMissing, "snapshot_missing", 409},
    CodeInfo{ErrorCode::kTimeout, "timeout", 504},
    CodeInfo{ErrorCode::kConnectionFailed, "connection_failed", 502},
    CodeInfo{ErrorCode::kSchemaViolation, "schema_violation", 502},
    CodeInfo{ErrorCode::kComponentError, "component_error", 502},
    CodeInfo{ErrorCode::kStageFailure, "stage_failure", 502},
    CodeInfo{ErrorCode::kDimensionMismatch, "dimension_mismatch", 400},
    CodeInfo{ErrorCode::kDivergenceDetected, "divergence_detected", 422},
    CodeInfo{ErrorCode::kModelMissing, "model_missing", 409},
    CodeInfo{ErrorCode::kInvalidModel, "invalid_model", 409},
    CodeInfo{ErrorCode::kNoPipelineMatchesConstraints,
             "no_pipeline_matches_constraints", 409},
    CodeInfo{ErrorCode::kUnknownRun, "unknown_run", 404},
    CodeInfo{ErrorCode::kIndexOutOfRange, "index_out_of_range", 422},
    CodeInfo{ErrorCode::kConfigInvalid, "config_invalid", 400},
    CodeInfo{ErrorCode::kPortInUse, "port_in_use", 500},
    CodeInfo{ErrorCode::kNotFound, "not_found", 404},
    CodeInfo{ErrorCode::kInternal, "internal", 500},
};

constexpr std::array<ErrorCode, kCodes.size()> MakeCodeList() {
  std::array<ErrorCode, kCodes.size()> out{};
  for (std::size_t i = 0; i < kCodes.size(); ++i) out[i] = kCodes[i].code;
  return out;
}

constexpr auto kCodeList = MakeCodeList();

const CodeInfo& Lookup(ErrorCode code) {
  for (const auto& info : kCodes) {
    if (info.code == code) return info;
  }
  return kCodes.back();
}

}  // namespace

std::string_view error_code_name(ErrorCode code) { return Lookup(code).name; }

int http_status(ErrorCode code) { return Lookup(code).status; }

std::span<const ErrorCode> all_error_codes() { return kCodeList; }

Error::Error(ErrorCode code, std::string message, std::string subject)
    : std::runtime_error(std::move(message)),
      code_(code),
      subject_(std::move(subject)) {}

}  // namespace plumber
