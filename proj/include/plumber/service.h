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

#ifndef PLUMBER_SERVICE_H_
#define PLUMBER_SERVICE_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "plumber/builtin.h"
#include "plumber/cache.h"
#include "plumber/config.h"
#include "plumber/evaluation.h"
#include "plumber/feedback.h"
#include "plumber/json_codec.h"
#include "plumber/registry.h"
#include "plumber/runner.h"
#include "plumber/selector.h"

namespace plumber {

struct ApiRequest {
  std::string method;  // "GET", "POST", ...
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

// {"error":{"code","message","subject"}}
Json error_body(const Error& e);

// The application core behind both the HTTP gateway and the CLI. Every
// typed operation returns the JSON document the API would send, so both
// front ends print identical results.
class Service {
 public:
  explicit Service(Config config);
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Json components() const;
  // {"pipelines":[...],"stats":{...}}; `kg` filters the list only.
  Json pipelines(const std::optional<std::string>& kg) const;
  // Body: {"coref","extractor","linking":[...],"kg"} or {"pipeline_id"}.
  Json validate_pipeline(const Json& body) const;
  // Body: {"text","kg"?}. Returns the chosen pipeline and the ranking.
  Json select(const Json& body) const;
  // Body: RunRequest. Returns the RunResult (plus "scores" in automatic
  // mode).
  Json run(const Json& body) const;
  Json get_run(const std::string& run_id) const;
  // Body: {"run_id","triple_index","verdict","pipeline_id"?}.
  Json feedback(const Json& body);
  Json profiles() const;
  Json health() const;

  // Batch operations used by the CLI.
  std::vector<PipelineProfile> bench(const std::vector<CorpusDocument>& corpus,
                                     const std::optional<std::string>& kg) const;
  TrainResult train(const std::vector<PipelineProfile>& profiles,
                    const std::vector<CorpusDocument>& corpus,
                    const Hyperparameters& hp) const;

  // Atomically replaces the selector model used by later requests.
  void set_model(std::shared_ptr<const SelectorModel> model);
  std::shared_ptr<const SelectorModel> model() const;

  // Dispatches one API call; never throws. Module errors map to their HTTP
  // status and machine code.
  ApiResponse handle(const ApiRequest& request);

  const Config& config() const { return config_; }
  Registry& registry() { return registry_; }
  const Runner& runner() const { return *runner_; }
  Runner& runner() { return *runner_; }
  const RunStore& runs() const { return runs_; }

 private:
  Document DocumentFromRequest(const Json& body) const;
  Selection Choose(const Json& body, const std::string& text) const;
  ApiResponse Dispatch(const ApiRequest& request);

  Config config_;
  Registry registry_;
  std::shared_ptr<SnapshotStore> snapshots_;
  std::unique_ptr<NativeHost> native_;
  std::unique_ptr<ContentCache> cache_;
  RunStore runs_;
  std::unique_ptr<Runner> runner_;
  FeedbackStore feedback_;
  mutable std::mutex model_mu_;
  std::shared_ptr<const SelectorModel> model_;
};

}  // namespace plumber

#endif  // PLUMBER_SERVICE_H_
