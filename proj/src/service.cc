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

#include "plumber/service.h"

#include <algorithm>
#include <chrono>
#include <filesystem>

#include "plumber/digest.h"
#include "plumber/error.h"

namespace plumber {

namespace fs = std::filesystem;

namespace {

Error BadRequest(const std::string& message, const std::string& subject = "") {
  return Error(ErrorCode::kInvalidRequest, message, subject);
}

void RequireObject(const Json& body) {
  if (!body.is_object()) throw BadRequest("request body must be a JSON object");
}

const std::string& RequireString(const Json& body, const std::string& key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw BadRequest("field '" + key + "' must be a string", key);
  }
  return it->get_ref<const std::string&>();
}

std::optional<std::string> OptionalString(const Json& body,
                                          const std::string& key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw BadRequest("field '" + key + "' must be a string", key);
  }
  return it->get<std::string>();
}

// {"coref","extractor","linking":[...],"kg"} or {"pipeline_id"}.
Pipeline SelectionFromJson(const Registry& registry, const Json& sel,
                           const std::optional<std::string>& kg_override) {
  RequireObject(sel);
  if (sel.contains("pipeline_id")) {
    PipelineSelection s = parse_pipeline_id(RequireString(sel, "pipeline_id"));
    return registry.validate_manual_selection(s.coref, s.extractor, s.linking,
                                              s.kg);
  }
  const std::string& coref = RequireString(sel, "coref");
  const std::string& extractor = RequireString(sel, "extractor");
  auto linking_it = sel.find("linking");
  if (linking_it == sel.end() || !linking_it->is_array()) {
    throw BadRequest("field 'linking' must be an array of component ids",
                     "linking");
  }
  std::vector<std::string> linking;
  for (const auto& id : *linking_it) {
    if (!id.is_string()) {
      throw BadRequest("field 'linking' must be an array of component ids",
                       "linking");
    }
    linking.push_back(id.get<std::string>());
  }
  std::string kg;
  if (kg_override) {
    kg = *kg_override;
  } else {
    kg = RequireString(sel, "kg");
  }
  return registry.validate_manual_selection(coref, extractor, linking, kg);
}

Json StatsToJson(const PoolStats& stats) {
  Json per_kg = Json::object();
  for (const auto& [kg, c] : stats.per_kg) {
    per_kg[kg] = {{"entity", c.entity}, {"relation", c.relation},
                  {"joint", c.joint}};
  }
  return Json{{"coref", stats.coref},
              {"extractors", stats.extractors},
              {"per_kg", per_kg},
              {"total", stats.total}};
}

Json SelectionToJson(const Selection& s) {
  std::vector<std::pair<std::string, double>> ranked(s.scores.begin(),
                                                     s.scores.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  Json ranking = Json::array();
  for (const auto& [id, score] : ranked) {
    ranking.push_back({{"pipeline_id", id}, {"score", score}});
  }
  return Json{{"pipeline", pipeline_to_json(s.pipeline)},
              {"scores", s.scores},
              {"ranking", ranking}};
}

std::int64_t NowSeconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

Json error_body(const Error& e) {
  return Json{{"error",
               {{"code", e.code_name()},
                {"message", e.what()},
                {"subject", e.subject()}}}};
}

Service::Service(Config config)
    : config_(std::move(config)),
      snapshots_(std::make_shared<SnapshotStore>()),
      runs_(config_.runs_dir()),
      feedback_(config_.feedback_log()) {
  snapshots_->load_dir(config_.kg_dir());
  Lexicon lexicon;
  if (fs::is_directory(config_.lexicon_dir())) {
    lexicon = Lexicon::load_dir(config_.lexicon_dir());
  }
  native_ = std::make_unique<NativeHost>(std::move(lexicon), snapshots_);
  if (config_.components_path || fs::exists(config_.components_file())) {
    load_components_into(registry_, config_.components_file());
  }
  if (config_.cache_enabled) {
    cache_ = std::make_unique<ContentCache>(config_.cache_budget_bytes,
                                            config_.cache_dir());
  }
  RunnerOptions options;
  options.cache_enabled = config_.cache_enabled;
  options.parallelism = config_.parallelism;
  runner_ = std::make_unique<Runner>(registry_, *native_, options, cache_.get(),
                                     &runs_);
  if (fs::exists(config_.model_file())) {
    model_ = std::make_shared<const SelectorModel>(load_model(config_.model_file()));
  }
}

void Service::set_model(std::shared_ptr<const SelectorModel> model) {
  std::lock_guard lock(model_mu_);
  model_ = std::move(model);
}

std::shared_ptr<const SelectorModel> Service::model() const {
  std::lock_guard lock(model_mu_);
  return model_;
}

Json Service::components() const {
  Json out = Json::array();
  for (const auto& d : registry_.list_components()) {
    out.push_back(descriptor_to_json(d));
  }
  return out;
}

Json Service::pipelines(const std::optional<std::string>& kg) const {
  auto pool = registry_.enumerate_pipelines();
  Json list = Json::array();
  for (const auto& p : pool->pipelines) {
    if (kg && p.kg != *kg) continue;
    list.push_back(pipeline_to_json(p));
  }
  return Json{{"pipelines", list}, {"stats", StatsToJson(pool->stats)}};
}

Json Service::validate_pipeline(const Json& body) const {
  Pipeline p = SelectionFromJson(registry_, body, std::nullopt);
  return Json{{"valid", true}, {"pipeline", pipeline_to_json(p)}};
}

Document Service::DocumentFromRequest(const Json& body) const {
  RequireObject(body);
  const bool has_text = body.contains("text");
  const bool has_file = body.contains("file");
  if (has_text == has_file) {
    throw BadRequest("exactly one of 'text' and 'file' is required");
  }
  Document doc;
  if (has_text) {
    doc.text = RequireString(body, "text");
    doc.source = DocumentSource::kInline;
  } else {
    const Json& file = body["file"];
    RequireObject(file);
    RequireString(file, "name");
    doc.source = DocumentSource::kFile;
    auto it = file.find("content");
    if (it == file.end() || !it->is_string()) {
      throw BadRequest("field 'file.content' must be a string", "file.content");
    }
    doc.text = it->get<std::string>();
  }
  if (auto id = OptionalString(body, "document_id")) {
    doc.id = *id;
  } else if (is_valid_utf8(doc.text)) {
    doc.id = "doc-" + sha256_hex(doc.text).substr(0, 12);
  } else {
    doc.id = "doc";
  }
  validate_document(doc, config_.max_document_chars);
  return doc;
}

Selection Service::Choose(const Json& body, const std::string& text) const {
  auto kg = OptionalString(body, "kg");
  auto model = this->model();
  ScoreAdjuster adjust;
  if (config_.blend_feedback) {
    adjust = [this](const std::string& id, double score) {
      return blend(score, feedback_.stats(id), config_.beta);
    };
  }
  return select_automatic(registry_, model.get(), text, kg, adjust);
}

Json Service::select(const Json& body) const {
  RequireObject(body);
  Document doc;
  doc.text = RequireString(body, "text");
  doc.id = "select";
  validate_document(doc, config_.max_document_chars);
  return SelectionToJson(Choose(body, doc.text));
}

Json Service::run(const Json& body) const {
  Document doc = DocumentFromRequest(body);
  std::string mode = "automatic";
  if (auto m = OptionalString(body, "mode")) {
    mode = *m;
  } else if (body.contains("pipeline_id") || body.contains("components")) {
    mode = "manual";
  }
  if (mode == "manual") {
    auto kg = OptionalString(body, "kg");
    Pipeline pipeline;
    if (body.contains("pipeline_id")) {
      pipeline = SelectionFromJson(
          registry_, Json{{"pipeline_id", body["pipeline_id"]}}, std::nullopt);
      if (kg && *kg != pipeline.kg) {
        throw Error(ErrorCode::kKgMismatch,
                    "pipeline targets KG '" + pipeline.kg +
                        "' but the request constrains KG '" + *kg + "'",
                    pipeline.id);
      }
    } else if (body.contains("components")) {
      if (!kg) throw BadRequest("manual mode requires 'kg'", "kg");
      pipeline = SelectionFromJson(registry_, body["components"], kg);
    } else {
      throw BadRequest("manual mode requires 'pipeline_id' or 'components'",
                       "components");
    }
    return run_result_to_json(
        runner_->run_pipeline(pipeline, doc, RunMode::kManual));
  }
  if (mode != "automatic") {
    throw BadRequest("mode must be 'manual' or 'automatic'", "mode");
  }
  Selection selection = Choose(body, doc.text);
  Json out = run_result_to_json(
      runner_->run_pipeline(selection.pipeline, doc, RunMode::kAutomatic));
  out["scores"] = selection.scores;
  return out;
}

Json Service::get_run(const std::string& run_id) const {
  auto run = runs_.get(run_id);
  if (!run) {
    throw Error(ErrorCode::kUnknownRun, "unknown run '" + run_id + "'", run_id);
  }
  return run_result_to_json(*run);
}

Json Service::feedback(const Json& body) {
  RequireObject(body);
  if (body.contains("timestamp")) {
    throw BadRequest("'timestamp' is assigned by the server", "timestamp");
  }
  FeedbackRecord record = feedback_record_from_json(body);
  auto run = runs_.get(record.run_id);
  if (!run) {
    throw Error(ErrorCode::kUnknownRun, "unknown run '" + record.run_id + "'",
                record.run_id);
  }
  if (!record.pipeline_id.empty() && record.pipeline_id != run->pipeline.id) {
    throw BadRequest("pipeline_id does not match the run's pipeline",
                     "pipeline_id");
  }
  record.pipeline_id = run->pipeline.id;
  record.timestamp = NowSeconds();
  feedback_.record(record, [&](const std::string& id) -> std::optional<std::size_t> {
    if (id != run->run_id) return std::nullopt;
    return run->triples.size();
  });
  FeedbackStats s = feedback_.stats(record.pipeline_id);
  return Json{{"record", feedback_record_to_json(record)},
              {"stats",
               {{"pipeline_id", s.pipeline_id},
                {"accepts", s.accepts},
                {"rejects", s.rejects}}}};
}

Json Service::profiles() const {
  Json out = Json::array();
  if (!fs::exists(config_.profiles_file())) return out;
  for (const auto& p : load_profiles(config_.profiles_file())) {
    out.push_back(profile_to_json(p));
  }
  return out;
}

Json Service::health() const {
  return Json{{"status", "ok"},
              {"components", registry_.size()},
              {"model_loaded", model() != nullptr}};
}

std::vector<PipelineProfile> Service::bench(
    const std::vector<CorpusDocument>& corpus,
    const std::optional<std::string>& kg) const {
  auto pool = registry_.enumerate_pipelines();
  std::vector<Pipeline> pipelines;
  for (const auto& p : pool->pipelines) {
    if (!kg || p.kg == *kg) pipelines.push_back(p);
  }
  if (pipelines.empty()) {
    throw Error(ErrorCode::kNoPipelineMatchesConstraints,
                "no pipeline aligns to KG '" + kg.value_or("") + "'",
                kg.value_or(""));
  }
  return benchmark(*runner_, pipelines, corpus);
}

TrainResult Service::train(const std::vector<PipelineProfile>& profiles,
                           const std::vector<CorpusDocument>& corpus,
                           const Hyperparameters& hp) const {
  if (profiles.empty()) throw BadRequest("no pipeline profiles to train on");
  if (corpus.empty()) throw BadRequest("the training corpus is empty");
  const auto n = static_cast<Eigen::Index>(corpus.size());
  const auto p = static_cast<Eigen::Index>(profiles.size());
  TrainingSet set;
  set.features.resize(n, static_cast<Eigen::Index>(kHandcraftedFeatures + hp.hash_dim));
  set.targets.resize(n, p);
  std::vector<std::string> ids;
  for (Eigen::Index k = 0; k < p; ++k) {
    const PipelineProfile& prof = profiles[static_cast<std::size_t>(k)];
    ids.push_back(prof.pipeline_id);
    std::map<std::string, double> f1;
    for (std::size_t i = 0; i < prof.document_ids.size() &&
                            i < prof.per_document_f1.size();
         ++i) {
      f1[prof.document_ids[i]] = prof.per_document_f1[i];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string& doc_id = corpus[static_cast<std::size_t>(i)].document.id;
      auto it = f1.find(doc_id);
      if (it == f1.end()) {
        throw BadRequest("profile '" + prof.pipeline_id +
                             "' has no score for document '" + doc_id + "'",
                         doc_id);
      }
      set.targets(i, k) = it->second;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    set.features.row(i) =
        featurize(corpus[static_cast<std::size_t>(i)].document.text, hp.hash_dim)
            .transpose();
  }
  return plumber::train(set, std::move(ids), hp);
}

ApiResponse Service::Dispatch(const ApiRequest& req) {
  std::string path = req.path;
  while (path.size() > 1 && path.back() == '/') path.pop_back();

  auto body = [&req]() {
    Json j = Json::parse(req.body, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw BadRequest("request body is not valid JSON");
    return j;
  };
  auto route = [&](const char* method) {
    if (req.method != method) {
      throw Error(ErrorCode::kNotFound,
                  "method " + req.method + " is not supported on " + path, path);
    }
  };

  if (path == "/components") {
    route("GET");
    return {200, components()};
  }
  if (path == "/pipelines") {
    route("GET");
    std::optional<std::string> kg;
    if (auto it = req.query.find("kg"); it != req.query.end() && !it->second.empty()) {
      kg = it->second;
    }
    return {200, pipelines(kg)};
  }
  if (path == "/pipelines/validate") {
    route("POST");
    return {200, validate_pipeline(body())};
  }
  if (path == "/select") {
    route("POST");
    return {200, select(body())};
  }
  if (path == "/run") {
    route("POST");
    return {200, run(body())};
  }
  if (path.starts_with("/runs/") && path.size() > 6 &&
      path.find('/', 6) == std::string::npos) {
    route("GET");
    return {200, get_run(path.substr(6))};
  }
  if (path == "/feedback") {
    route("POST");
    return {200, feedback(body())};
  }
  if (path == "/profiles") {
    route("GET");
    return {200, profiles()};
  }
  if (path == "/health") {
    route("GET");
    return {200, health()};
  }
  throw Error(ErrorCode::kNotFound, "no such endpoint " + path, path);
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return Dispatch(request);
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e)};
  } catch (const Json::exception& e) {
    Error err(ErrorCode::kInvalidRequest, e.what());
    return {400, error_body(err)};
  } catch (const std::exception& e) {
    Error err(ErrorCode::kInternal, e.what());
    return {500, error_body(err)};
  }
}

}  // namespace plumber
