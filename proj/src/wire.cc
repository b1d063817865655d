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

#include "plumber/wire.h"

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>

#include <httplib.h>

#include "plumber/error.h"
#include "plumber/json_codec.h"

namespace plumber {

namespace {

// Tracks the dotted path of the value under inspection so schema errors can
// name the offending field.
class SchemaReader {
 public:
  [[noreturn]] void Fail(std::string_view field, std::string_view why) const {
    std::string path = Join(field);
    throw Error(ErrorCode::kSchemaViolation,
                "schema violation at '" + path + "': " + std::string(why), path);
  }

  const Json& Field(const Json& obj, const char* key) const {
    if (!obj.is_object()) Fail("", "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) Fail(key, "missing");
    return *it;
  }

  std::string String(const Json& obj, const char* key) const {
    const Json& v = Field(obj, key);
    if (!v.is_string()) Fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::size_t Offset(const Json& obj, const char* key) const {
    const Json& v = Field(obj, key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      Fail(key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  const Json& Array(const Json& obj, const char* key) const {
    const Json& v = Field(obj, key);
    if (!v.is_array()) Fail(key, "expected an array");
    return v;
  }

  void Push(std::string segment) { path_.push_back(std::move(segment)); }
  void Pop() { path_.pop_back(); }

 private:
  std::string Join(std::string_view leaf) const {
    std::string out;
    for (const auto& p : path_) {
      if (!out.empty()) out += '.';
      out += p;
    }
    if (!leaf.empty()) {
      if (!out.empty()) out += '.';
      out += leaf;
    }
    return out;
  }

  std::vector<std::string> path_;
};

class ScopedPath {
 public:
  ScopedPath(SchemaReader& r, std::string segment) : r_(r) {
    r_.Push(std::move(segment));
  }
  ~ScopedPath() { r_.Pop(); }
  ScopedPath(const ScopedPath&) = delete;
  ScopedPath& operator=(const ScopedPath&) = delete;

 private:
  SchemaReader& r_;
};

std::string Indexed(const char* key, std::size_t i) {
  return std::string(key) + "[" + std::to_string(i) + "]";
}

Span ReadSpan(SchemaReader& r, const Json& obj) {
  Span span{r.Offset(obj, "start"), r.Offset(obj, "end")};
  if (span.start >= span.end) r.Fail("end", "span end must exceed start");
  return span;
}

Mention ReadMention(SchemaReader& r, const Json& obj) {
  Mention m;
  m.surface = r.String(obj, "surface");
  if (normalize_surface(m.surface).empty()) {
    r.Fail("surface", "empty after normalization");
  }
  m.span = ReadSpan(r, obj);
  return m;
}

TextTriple ReadTextTriple(SchemaReader& r, const Json& obj) {
  TextTriple t;
  {
    const Json& v = r.Field(obj, "subject");
    ScopedPath p(r, "subject");
    t.subject = ReadMention(r, v);
  }
  {
    const Json& v = r.Field(obj, "predicate");
    ScopedPath p(r, "predicate");
    t.predicate = ReadMention(r, v);
  }
  {
    const Json& v = r.Field(obj, "object");
    ScopedPath p(r, "object");
    t.object = ReadMention(r, v);
  }
  return t;
}

std::vector<TextTriple> ReadTextTriples(SchemaReader& r, const Json& obj) {
  const Json& arr = r.Array(obj, "triples");
  std::vector<TextTriple> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ScopedPath p(r, Indexed("triples", i));
    out.push_back(ReadTextTriple(r, arr[i]));
  }
  return out;
}

LinkedTerm ReadLinkedTerm(SchemaReader& r, const Json& obj, std::string_view kg) {
  LinkedTerm t;
  t.mention = ReadMention(r, obj);
  const Json& conf = r.Field(obj, "confidence");
  if (!conf.is_number()) r.Fail("confidence", "expected a number");
  t.confidence = conf.get<double>();
  if (!(t.confidence >= 0.0 && t.confidence <= 1.0)) {
    r.Fail("confidence", "outside [0,1]");
  }
  auto iri = obj.find("iri");
  if (iri != obj.end() && !iri->is_null()) {
    if (!iri->is_string() || !is_absolute_iri(iri->get<std::string>())) {
      r.Fail("iri", "expected an absolute IRI");
    }
    t.ref = KGRef{iri->get<std::string>(), std::string(kg)};
  } else if (t.confidence != 0.0) {
    r.Fail("confidence", "must be 0 for unlinked terms");
  }
  return t;
}

AlignedTriple ReadAlignedTriple(SchemaReader& r, const Json& obj,
                                std::string_view kg) {
  AlignedTriple t;
  {
    const Json& v = r.Field(obj, "subject");
    ScopedPath p(r, "subject");
    t.subject = ReadLinkedTerm(r, v, kg);
  }
  {
    const Json& v = r.Field(obj, "predicate");
    ScopedPath p(r, "predicate");
    t.predicate = ReadLinkedTerm(r, v, kg);
  }
  {
    const Json& v = r.Field(obj, "object");
    ScopedPath p(r, "object");
    t.object = ReadLinkedTerm(r, v, kg);
  }
  return t;
}

Json SpanJson(Span s) { return Json{{"start", s.start}, {"end", s.end}}; }

Json BodyToJson(const ResultBody& body) {
  return std::visit(
      [](const auto& b) -> Json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, CorefResult>) {
          Json subs = Json::array();
          for (const auto& s : b.substitutions) {
            subs.push_back({{"pronoun_span", SpanJson(s.pronoun_span)},
                            {"antecedent", s.antecedent},
                            {"out_span", SpanJson(s.out_span)}});
          }
          return Json{{"text", b.text}, {"substitutions", subs}};
        } else if constexpr (std::is_same_v<T, ExtractionResult>) {
          Json triples = Json::array();
          for (const auto& t : b.triples) triples.push_back(text_triple_to_json(t));
          return Json{{"triples", triples}};
        } else {
          Json aligned = Json::array();
          for (const auto& t : b.aligned) {
            aligned.push_back(aligned_triple_to_json(t));
          }
          return Json{{"aligned", aligned}};
        }
      },
      body);
}

ResultBody ReadBody(SchemaReader& r, const Json& result, TaskKind task,
                    std::string_view kg) {
  ScopedPath p(r, "result");
  if (!result.is_object()) r.Fail("", "expected an object");
  switch (task) {
    case TaskKind::kCoref: {
      CorefResult out;
      out.text = r.String(result, "text");
      const Json& subs = r.Array(result, "substitutions");
      for (std::size_t i = 0; i < subs.size(); ++i) {
        ScopedPath sp(r, Indexed("substitutions", i));
        Substitution s;
        {
          const Json& v = r.Field(subs[i], "pronoun_span");
          ScopedPath q(r, "pronoun_span");
          s.pronoun_span = ReadSpan(r, v);
        }
        s.antecedent = r.String(subs[i], "antecedent");
        {
          const Json& v = r.Field(subs[i], "out_span");
          ScopedPath q(r, "out_span");
          s.out_span = ReadSpan(r, v);
        }
        out.substitutions.push_back(std::move(s));
      }
      return out;
    }
    case TaskKind::kTripleExtraction:
      return ExtractionResult{ReadTextTriples(r, result)};
    case TaskKind::kEntityLinking:
    case TaskKind::kRelationLinking:
    case TaskKind::kJointLinking: {
      LinkingResult out;
      const Json& arr = r.Array(result, "aligned");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        ScopedPath ap(r, Indexed("aligned", i));
        out.aligned.push_back(ReadAlignedTriple(r, arr[i], kg));
      }
      return out;
    }
  }
  r.Fail("", "unknown task");
}

std::mutex& SemaphoreMutex() {
  static std::mutex mu;
  return mu;
}

std::shared_ptr<std::counting_semaphore<>> EndpointSemaphore(
    const std::string& endpoint, std::size_t cap) {
  static std::map<std::string, std::shared_ptr<std::counting_semaphore<>>> map;
  std::lock_guard lock(SemaphoreMutex());
  auto& slot = map[endpoint];
  if (!slot) {
    slot = std::make_shared<std::counting_semaphore<>>(
        static_cast<std::ptrdiff_t>(std::max<std::size_t>(cap, 1)));
  }
  return slot;
}

struct Endpoint {
  std::string scheme_host_port;
  std::string base_path;
};

Endpoint ParseEndpoint(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kConnectionFailed,
                "endpoint '" + url + "' is not an absolute URL", url);
  }
  auto path = url.find('/', scheme + 3);
  Endpoint e;
  e.scheme_host_port = url.substr(0, path);
  if (path != std::string::npos) e.base_path = url.substr(path);
  while (!e.base_path.empty() && e.base_path.back() == '/') e.base_path.pop_back();
  return e;
}

}  // namespace

InvocationResult InvocationResult::Ok(ResultBody body) {
  InvocationResult r;
  r.status = InvocationStatus::kOk;
  r.result = std::move(body);
  return r;
}

InvocationResult InvocationResult::Failure(std::string message) {
  InvocationResult r;
  r.status = InvocationStatus::kError;
  r.message = std::move(message);
  return r;
}

void validate_payload(const InvocationPayload& payload) {
  auto fail = [](const char* field, const std::string& why) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string("payload field '") + field + "': " + why, field);
  };
  if (payload.version != kProtocolVersion) {
    fail("version", "unsupported protocol version " +
                        std::to_string(payload.version));
  }
  if (is_linking_task(payload.task)) {
    if (!payload.triples) fail("triples", "required for linking tasks");
    if (!payload.kg) fail("kg", "required for linking tasks");
    if (!is_valid_kg_tag(*payload.kg)) fail("kg", "invalid KG tag");
  } else {
    if (!payload.text) fail("text", "required for text tasks");
    if (payload.triples) fail("triples", "not allowed for text tasks");
  }
}

std::string serialize_payload(const InvocationPayload& payload) {
  validate_payload(payload);
  Json j{{"version", payload.version}, {"task", task_name(payload.task)}};
  if (payload.text) j["text"] = *payload.text;
  if (payload.kg) j["kg"] = *payload.kg;
  if (payload.triples) {
    Json triples = Json::array();
    for (const auto& t : *payload.triples) triples.push_back(text_triple_to_json(t));
    j["triples"] = std::move(triples);
  }
  return canonical_dump(j);
}

InvocationPayload parse_payload(std::string_view bytes) {
  SchemaReader r;
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error&) {
    r.Fail("", "body is not valid JSON");
  }
  if (!j.is_object()) r.Fail("", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "version" && key != "task" && key != "text" && key != "triples" &&
        key != "kg") {
      r.Fail(key, "unknown field");
    }
  }
  InvocationPayload p;
  const Json& version = r.Field(j, "version");
  if (!version.is_number_integer()) r.Fail("version", "expected an integer");
  p.version = version.get<int>();
  if (p.version != kProtocolVersion) r.Fail("version", "unsupported version");
  auto task = parse_task(r.String(j, "task"));
  if (!task) r.Fail("task", "unknown task");
  p.task = *task;
  if (j.contains("text")) p.text = r.String(j, "text");
  if (j.contains("kg")) p.kg = r.String(j, "kg");
  if (j.contains("triples")) p.triples = ReadTextTriples(r, j);
  validate_payload(p);
  return p;
}

std::string serialize_result(const InvocationResult& result) {
  Json j;
  if (result.ok()) {
    j["status"] = "ok";
    j["result"] = result.result ? BodyToJson(*result.result) : Json::object();
  } else {
    j["status"] = "error";
    j["message"] = result.message.value_or("");
  }
  return canonical_dump(j);
}

InvocationResult parse_result(std::string_view bytes, TaskKind task,
                              std::string_view kg) {
  SchemaReader r;
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error&) {
    r.Fail("", "body is not valid JSON");
  }
  if (!j.is_object()) r.Fail("", "expected an object");
  const std::string status = r.String(j, "status");
  if (status == "error") {
    return InvocationResult::Failure(r.String(j, "message"));
  }
  if (status != "ok") r.Fail("status", "expected \"ok\" or \"error\"");
  return InvocationResult::Ok(ReadBody(r, r.Field(j, "result"), task, kg));
}

InvocationResult invoke_remote(const ComponentDescriptor& desc,
                               const InvocationPayload& payload,
                               std::int64_t timeout_ms,
                               const RemoteOptions& options) {
  using Clock = std::chrono::steady_clock;
  const std::string body = serialize_payload(payload);
  const Endpoint endpoint = ParseEndpoint(desc.target.ref);
  const std::string path = endpoint.base_path + "/invoke";

  auto semaphore =
      EndpointSemaphore(endpoint.scheme_host_port, options.max_concurrent_per_endpoint);
  if (!semaphore->try_acquire_for(std::chrono::milliseconds(timeout_ms))) {
    throw Error(ErrorCode::kTimeout,
                "component '" + desc.id + "' is saturated", desc.id);
  }
  struct Release {
    std::counting_semaphore<>* s;
    ~Release() { s->release(); }
  } release{semaphore.get()};

  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                                 start)
        .count();
  };
  const auto timeout = std::chrono::milliseconds(timeout_ms);
  const auto connect_timeout = std::chrono::milliseconds(
      std::min<std::int64_t>(options.connect_timeout_ms, timeout_ms));

  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(endpoint.scheme_host_port);
    client.set_connection_timeout(connect_timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_keep_alive(false);

    const auto attempt_start = Clock::now();
    auto res = client.Post(path, body, "application/json");
    const auto attempt_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                Clock::now() - attempt_start)
                                .count();
    if (!res) {
      const httplib::Error err = res.error();
      const bool connect_phase = err == httplib::Error::Connection ||
                                 err == httplib::Error::ConnectionTimeout ||
                                 err == httplib::Error::BindIPAddress ||
                                 err == httplib::Error::ProxyConnection;
      if (!connect_phase && attempt_ms >= timeout_ms) {
        throw Error(ErrorCode::kTimeout,
                    "component '" + desc.id + "' did not answer within " +
                        std::to_string(timeout_ms) + " ms",
                    std::to_string(timeout_ms));
      }
      if (attempt == 0) continue;
      throw Error(ErrorCode::kConnectionFailed,
                  "component '" + desc.id + "' unreachable: " +
                      httplib::to_string(err),
                  desc.id);
    }
    if (elapsed_ms() > timeout_ms + options.connect_timeout_ms) {
      throw Error(ErrorCode::kTimeout,
                  "component '" + desc.id + "' exceeded its deadline",
                  std::to_string(timeout_ms));
    }

    InvocationResult result;
    try {
      result = parse_result(res->body, payload.task, payload.kg.value_or(""));
    } catch (const Error&) {
      if (res->status != 200) {
        throw Error(ErrorCode::kComponentError,
                    "component '" + desc.id + "' returned HTTP " +
                        std::to_string(res->status),
                    desc.id);
      }
      throw;
    }
    if (!result.ok()) {
      throw Error(ErrorCode::kComponentError,
                  "component '" + desc.id + "': " + result.message.value_or(""),
                  desc.id);
    }
    result.latency_ms = elapsed_ms();
    return result;
  }
  throw Error(ErrorCode::kConnectionFailed,
              "component '" + desc.id + "' unreachable", desc.id);
}

}  // namespace plumber
