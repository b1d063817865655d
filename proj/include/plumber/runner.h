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

#ifndef PLUMBER_RUNNER_H_
#define PLUMBER_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "plumber/builtin.h"
#include "plumber/cache.h"
#include "plumber/core_model.h"
#include "plumber/error.h"
#include "plumber/json_codec.h"
#include "plumber/registry.h"
#include "plumber/wire.h"

namespace plumber {

enum class RunMode { kManual, kAutomatic };
std::string_view run_mode_name(RunMode mode);

enum class StageStatus { kOk, kFailed, kCacheHit };
std::string_view stage_status_name(StageStatus status);

struct StageTrace {
  std::string component_id;
  TaskKind task = TaskKind::kCoref;
  std::int64_t latency_ms = 0;
  StageStatus status = StageStatus::kOk;
  std::string payload_hash_in;
  std::string payload_hash_out;  // empty when the stage failed
};

struct StageFailure {
  std::string component_id;
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
};

struct RunResult {
  std::string run_id;
  Pipeline pipeline;
  std::string document_id;
  std::string input_hash;
  std::vector<AlignedTriple> triples;
  std::vector<StageTrace> trace;
  RunMode mode = RunMode::kManual;
  std::optional<StageFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

Json run_result_to_json(const RunResult& r);
RunResult run_result_from_json(const Json& j);

// The canonical triple list of a run, serialized; used to compare runs
// byte for byte.
std::string triples_bytes(const std::vector<AlignedTriple>& triples);

// Append-only store of run results. With a directory, each run is written
// once to {dir}/{run_id}.json and read back on demand.
class RunStore {
 public:
  explicit RunStore(std::optional<std::filesystem::path> dir = std::nullopt);

  // Throws kInternal if a run with the same id already exists.
  void save(const RunResult& result);
  std::optional<RunResult> get(const std::string& run_id) const;

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  mutable std::map<std::string, RunResult> runs_;
};

struct RunnerOptions {
  bool cache_enabled = true;
  std::size_t parallelism = 0;  // 0 = hardware concurrency
  std::int64_t default_timeout_ms = kDefaultTimeoutMs;
  RemoteOptions remote;
};

using RemoteInvoker = std::function<InvocationResult(
    const ComponentDescriptor&, const InvocationPayload&, std::int64_t)>;

// Executes pipelines stage by stage: coref, triple extraction, then entity
// and relation linking (or one joint linker). Every stage, native or remote,
// is driven through the invocation payload contract.
class Runner {
 public:
  Runner(const Registry& registry, const NativeHost& native,
         RunnerOptions options = {}, ContentCache* cache = nullptr,
         RunStore* store = nullptr);

  // Replaces the HTTP adapter; used to inject failures in tests.
  void set_remote_invoker(RemoteInvoker invoker) { remote_ = std::move(invoker); }

  // Throws kInvalidPipeline (or the registry's validation errors) and
  // document validation errors. Stage failures are reported in the result.
  RunResult run_pipeline(const Pipeline& pipeline, const Document& doc,
                         RunMode mode) const;

  struct Job {
    Pipeline pipeline;
    Document document;
    RunMode mode = RunMode::kManual;
  };
  // Runs jobs concurrently up to the configured parallelism; results keep
  // job order. Per-job exceptions are converted into failed results.
  std::vector<RunResult> run_batch(const std::vector<Job>& jobs) const;

  std::size_t parallelism() const;
  const RunnerOptions& options() const { return options_; }

 private:
  struct StageOutput {
    InvocationResult result;
    StageTrace trace;
  };
  StageOutput RunStage(const ComponentDescriptor& desc,
                       const InvocationPayload& payload) const;

  const Registry& registry_;
  const NativeHost& native_;
  RunnerOptions options_;
  ContentCache* cache_;
  RunStore* store_;
  RemoteInvoker remote_;
};

std::string new_run_id();

}  // namespace plumber

#endif  // PLUMBER_RUNNER_H_
