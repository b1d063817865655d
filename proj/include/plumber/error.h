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

#ifndef PLUMBER_ERROR_H_
#define PLUMBER_ERROR_H_

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plumber {

// Every failure the framework reports maps to exactly one code. The string
// names returned by error_code_name() are the stable machine codes exposed by
// the HTTP API and must not change between releases.
enum class ErrorCode {
  kInvalidRequest,
  kInvalidDocument,
  kDocumentTooLarge,
  kDuplicateId,
  kInvalidDescriptor,
  kIncompletePool,
  kUnknownComponent,
  kTaskMismatch,
  kKgMismatch,
  kInvalidPipeline,
  kParseError,
  kInvariantViolation,
  kSnapshotMissing,
  kTimeout,
  kConnectionFailed,
  kSchemaViolation,
  kComponentError,
  kStageFailure,
  kDimensionMismatch,
  kDivergenceDetected,
  kModelMissing,
  kInvalidModel,
  kNoPipelineMatchesConstraints,
  kUnknownRun,
  kIndexOutOfRange,
  kConfigInvalid,
  kPortInUse,
  kNotFound,
  kInternal,
};

std::string_view error_code_name(ErrorCode code);
int http_status(ErrorCode code);
std::span<const ErrorCode> all_error_codes();

class Error : public std::runtime_error {
 public:
  // `subject` names what the error is about: a component id, a field path,
  // a KG tag, a line number. It may be empty.
  Error(ErrorCode code, std::string message, std::string subject = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }
  std::string_view code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace plumber

#endif  // PLUMBER_ERROR_H_
