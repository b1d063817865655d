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

#include "plumber/runner.h"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <tuple>

#include "plumber/digest.h"
#include "plumber/parallel.h"

namespace plumber {

namespace fs = std::filesystem;

namespace {

std::int64_t ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string TermKey(const LinkedTerm& t) {
  if (t.ref) return "iri:" + t.ref->iri;
  return "surface:" + normalize_surface(t.mention.surface);
}

std::vector<AlignedTriple> Deduplicate(std::vector<AlignedTriple> triples) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::vector<AlignedTriple> out;
  for (auto& t : triples) {
    if (seen.emplace(TermKey(t.subject), TermKey(t.predicate), TermKey(t.object))
            .second) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

Json StageTraceToJson(const StageTrace& t) {
  return Json{{"component_id", t.component_id},
              {"task", task_name(t.task)},
              {"latency_ms", t.latency_ms},
              {"status", stage_status_name(t.status)},
              {"payload_hash_in", t.payload_hash_in},
              {"payload_hash_out", t.payload_hash_out}};
}

StageStatus ParseStageStatus(const std::string& s) {
  if (s == "failed") return StageStatus::kFailed;
  if (s == "cache_hit") return StageStatus::kCacheHit;
  return StageStatus::kOk;
}

ErrorCode ParseErrorCode(std::string_view name) {
  for (ErrorCode c : all_error_codes()) {
    if (error_code_name(c) == name) return c;
  }
  return ErrorCode::kInternal;
}

}  // namespace

std::string_view run_mode_name(RunMode mode) {
  return mode == RunMode::kManual ? "manual" : "automatic";
}

std::string_view stage_status_name(StageStatus status) {
  switch (status) {
    case StageStatus::kOk:
      return "ok";
    case StageStatus::kFailed:
      return "failed";
    case StageStatus::kCacheHit:
      return "cache_hit";
  }
  return "ok";
}

std::string triples_bytes(const std::vector<AlignedTriple>& triples) {
  Json arr = Json::array();
  for (const auto& t : triples) arr.push_back(aligned_triple_to_json(t));
  return canonical_dump(arr);
}

Json run_result_to_json(const RunResult& r) {
  Json triples = Json::array();
  for (const auto& t : r.triples) triples.push_back(aligned_triple_to_json(t));
  Json trace = Json::array();
  for (const auto& t : r.trace) trace.push_back(StageTraceToJson(t));
  Json j{{"run_id", r.run_id},
         {"pipeline", pipeline_to_json(r.pipeline)},
         {"document_id", r.document_id},
         {"input_hash", r.input_hash},
         {"triples", triples},
         {"trace", trace},
         {"mode", run_mode_name(r.mode)},
         {"status", r.ok() ? "ok" : "failed"}};
  if (r.failure) {
    j["failure"] = {{"component_id", r.failure->component_id},
                    {"code", error_code_name(r.failure->code)},
                    {"message", r.failure->message}};
  }
  return j;
}

RunResult run_result_from_json(const Json& j) {
  RunResult r;
  r.run_id = j.at("run_id").get<std::string>();
  r.pipeline = pipeline_from_json(j.at("pipeline"));
  r.document_id = j.value("document_id", "");
  r.input_hash = j.at("input_hash").get<std::string>();
  for (const auto& t : j.at("triples")) {
    r.triples.push_back(aligned_triple_from_json(t, r.pipeline.kg));
  }
  for (const auto& t : j.at("trace")) {
    StageTrace st;
    st.component_id = t.at("component_id").get<std::string>();
    st.task = parse_task(t.at("task").get<std::string>())
                  .value_or(TaskKind::kCoref);
    st.latency_ms = t.at("latency_ms").get<std::int64_t>();
    st.status = ParseStageStatus(t.at("status").get<std::string>());
    st.payload_hash_in = t.value("payload_hash_in", "");
    st.payload_hash_out = t.value("payload_hash_out", "");
    r.trace.push_back(std::move(st));
  }
  r.mode = j.value("mode", "manual") == "automatic" ? RunMode::kAutomatic
                                                    : RunMode::kManual;
  if (j.contains("failure")) {
    const Json& f = j["failure"];
    r.failure = StageFailure{f.value("component_id", ""),
                             ParseErrorCode(f.value("code", "internal")),
                             f.value("message", "")};
  }
  return r;
}

std::string new_run_id() {
  static std::atomic<std::uint64_t> counter{0};
  static const std::uint64_t session = [] {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }();
  const auto now = std::chrono::duration_cast<std::chrono::microseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "run-%012llx-%08llx-%06llx",
                static_cast<unsigned long long>(now),
                static_cast<unsigned long long>(session & 0xffffffffu),
                static_cast<unsigned long long>(counter++));
  return buf;
}

RunStore::RunStore(std::optional<fs::path> dir) : dir_(std::move(dir)) {
  if (dir_) fs::create_directories(*dir_);
}

void RunStore::save(const RunResult& result) {
  std::unique_lock lock(mu_);
  if (runs_.contains(result.run_id)) {
    throw Error(ErrorCode::kInternal, "run id collision", result.run_id);
  }
  if (dir_) {
    fs::path path = *dir_ / (result.run_id + ".json");
    if (fs::exists(path)) {
      throw Error(ErrorCode::kInternal, "run id collision", result.run_id);
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << run_result_to_json(result).dump(2) << '\n';
      if (!out) {
        throw Error(ErrorCode::kInternal, "cannot write run file", path.string());
      }
    }
    fs::rename(tmp, path);
  }
  runs_.emplace(result.run_id, result);
}

std::optional<RunResult> RunStore::get(const std::string& run_id) const {
  {
    std::shared_lock lock(mu_);
    if (auto it = runs_.find(run_id); it != runs_.end()) return it->second;
  }
  if (!dir_) return std::nullopt;
  // Ids are generated by new_run_id(); reject anything that could escape the
  // store directory.
  if (run_id.empty() || run_id.find_first_of("/\\.") != std::string::npos) {
    return std::nullopt;
  }
  fs::path path = *dir_ / (run_id + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    Json j = Json::parse(in);
    RunResult r = run_result_from_json(j);
    std::unique_lock lock(mu_);
    runs_.emplace(run_id, r);
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Runner::Runner(const Registry& registry, const NativeHost& native,
               RunnerOptions options, ContentCache* cache, RunStore* store)
    : registry_(registry),
      native_(native),
      options_(options),
      cache_(cache),
      store_(store) {
  remote_ = [remote = options_.remote](const ComponentDescriptor& desc,
                                       const InvocationPayload& payload,
                                       std::int64_t timeout_ms) {
    return invoke_remote(desc, payload, timeout_ms, remote);
  };
}

std::size_t Runner::parallelism() const {
  return options_.parallelism == 0 ? default_parallelism()
                                   : options_.parallelism;
}

Runner::StageOutput Runner::RunStage(const ComponentDescriptor& desc,
                                     const InvocationPayload& payload) const {
  StageOutput out;
  out.trace.component_id = desc.id;
  out.trace.task = payload.task;
  const auto start = std::chrono::steady_clock::now();

  const std::string bytes_in = serialize_payload(payload);
  out.trace.payload_hash_in = sha256_hex(bytes_in);
  const CacheKey key{desc.id, desc.version, out.trace.payload_hash_in};
  const std::string kg = payload.kg.value_or("");

  if (options_.cache_enabled && cache_ != nullptr) {
    if (auto hit = cache_->lookup(key)) {
      try {
        out.result = parse_result(*hit, payload.task, kg);
        if (out.result.ok()) {
          out.trace.status = StageStatus::kCacheHit;
          out.trace.payload_hash_out = sha256_hex(*hit);
          out.trace.latency_ms = ElapsedMs(start);
          out.result.latency_ms = out.trace.latency_ms;
          return out;
        }
      } catch (const Error&) {
        // Unreadable entry: fall through and recompute.
      }
    }
  }

  if (desc.is_remote()) {
    out.result = remote_(desc, payload,
                         desc.timeout_ms.value_or(options_.default_timeout_ms));
  } else {
    out.result = native_.invoke(desc.target.ref, payload);
  }
  if (!out.result.ok()) {
    throw Error(ErrorCode::kComponentError, out.result.message.value_or(""),
                desc.id);
  }
  const std::string bytes_out = serialize_result(out.result);
  // Round-trip through the parser so native and remote results obey the same
  // schema.
  out.result = parse_result(bytes_out, payload.task, kg);
  out.trace.payload_hash_out = sha256_hex(bytes_out);
  out.trace.status = StageStatus::kOk;
  out.trace.latency_ms = ElapsedMs(start);
  out.result.latency_ms = out.trace.latency_ms;
  if (options_.cache_enabled && cache_ != nullptr) cache_->store(key, bytes_out);
  return out;
}

RunResult Runner::run_pipeline(const Pipeline& pipeline, const Document& doc,
                               RunMode mode) const {
  validate_document(doc);
  RunResult run;
  run.pipeline = registry_.validate(pipeline);
  run.run_id = new_run_id();
  run.document_id = doc.id;
  run.input_hash = sha256_hex(doc.text);
  run.mode = mode;

  // Runs one stage; on failure records the failed trace entry and returns
  // nullopt.
  auto stage = [&](const std::string& component_id,
                   const InvocationPayload& payload)
      -> std::optional<InvocationResult> {
    const auto start = std::chrono::steady_clock::now();
    std::string hash_in;
    try {
      hash_in = sha256_hex(serialize_payload(payload));
      const ComponentDescriptor desc = registry_.get(component_id);
      StageOutput out = RunStage(desc, payload);
      run.trace.push_back(out.trace);
      return std::move(out.result);
    } catch (const Error& e) {
      run.failure = StageFailure{component_id, e.code(), e.what()};
    } catch (const std::exception& e) {
      run.failure = StageFailure{component_id, ErrorCode::kInternal, e.what()};
    }
    run.trace.push_back(StageTrace{component_id, payload.task, ElapsedMs(start),
                                   StageStatus::kFailed, hash_in, ""});
    return std::nullopt;
  };
  auto fail_schema = [&](const std::string& component_id, std::string what) {
    run.trace.back().status = StageStatus::kFailed;
    run.trace.back().payload_hash_out.clear();
    run.failure =
        StageFailure{component_id, ErrorCode::kSchemaViolation, std::move(what)};
  };
  auto finish = [&]() -> RunResult {
    if (run.failure) run.triples.clear();
    if (store_ != nullptr) store_->save(run);
    return run;
  };

  InvocationPayload coref_payload;
  coref_payload.task = TaskKind::kCoref;
  coref_payload.text = doc.text;
  auto coref = stage(run.pipeline.coref, coref_payload);
  if (!coref) return finish();
  const auto& coref_body = std::get<CorefResult>(*coref->result);

  InvocationPayload extract_payload;
  extract_payload.task = TaskKind::kTripleExtraction;
  extract_payload.text = coref_body.text;
  auto extraction = stage(run.pipeline.extractor, extract_payload);
  if (!extraction) return finish();
  const auto& text_triples = std::get<ExtractionResult>(*extraction->result).triples;

  auto linking_payload = [&](TaskKind task) {
    InvocationPayload p;
    p.task = task;
    p.triples = text_triples;
    p.kg = run.pipeline.kg;
    return p;
  };

  std::vector<AlignedTriple> aligned;
  if (run.pipeline.joint()) {
    auto joint = stage(run.pipeline.linking[0],
                       linking_payload(TaskKind::kJointLinking));
    if (!joint) return finish();
    aligned = std::get<LinkingResult>(*joint->result).aligned;
  } else {
    auto entities = stage(run.pipeline.linking[0],
                          linking_payload(TaskKind::kEntityLinking));
    if (!entities) return finish();
    const auto& el = std::get<LinkingResult>(*entities->result).aligned;
    if (el.size() != text_triples.size()) {
      fail_schema(run.pipeline.linking[0],
                  "entity linker returned a different number of triples");
      return finish();
    }
    auto relations = stage(run.pipeline.linking[1],
                           linking_payload(TaskKind::kRelationLinking));
    if (!relations) return finish();
    const auto& rl = std::get<LinkingResult>(*relations->result).aligned;
    if (rl.size() != text_triples.size()) {
      fail_schema(run.pipeline.linking[1],
                  "relation linker returned a different number of triples");
      return finish();
    }
    for (std::size_t i = 0; i < el.size(); ++i) {
      aligned.push_back(AlignedTriple{el[i].subject, rl[i].predicate, el[i].object});
    }
  }
  run.triples = Deduplicate(std::move(aligned));
  return finish();
}

std::vector<RunResult> Runner::run_batch(const std::vector<Job>& jobs) const {
  std::vector<RunResult> results(jobs.size());
  parallel_for(jobs.size(), parallelism(), [&](std::size_t i) {
    const Job& job = jobs[i];
    try {
      results[i] = run_pipeline(job.pipeline, job.document, job.mode);
    } catch (const Error& e) {
      RunResult r;
      r.run_id = new_run_id();
      r.pipeline = job.pipeline;
      r.document_id = job.document.id;
      r.mode = job.mode;
      r.failure = StageFailure{"", e.code(), e.what()};
      results[i] = std::move(r);
    } catch (const std::exception& e) {
      RunResult r;
      r.run_id = new_run_id();
      r.pipeline = job.pipeline;
      r.document_id = job.document.id;
      r.mode = job.mode;
      r.failure = StageFailure{"", ErrorCode::kInternal, e.what()};
      results[i] = std::move(r);
    }
  });
  return results;
}

}  // namespace plumber
