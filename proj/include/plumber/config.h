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

#ifndef PLUMBER_CONFIG_H_
#define PLUMBER_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "plumber/cache.h"
#include "plumber/core_model.h"
#include "plumber/feedback.h"
#include "plumber/json_codec.h"

namespace plumber {

struct Config {
  int port = 8080;
  std::filesystem::path data_dir = "data";
  bool cache_enabled = true;
  std::uint64_t cache_budget_bytes = kDefaultCacheBudgetBytes;
  bool blend_feedback = true;
  double beta = kDefaultBlendWeight;
  std::string ui_origin = "*";
  std::size_t parallelism = 0;
  std::size_t max_document_chars = kDefaultMaxDocumentChars;
  std::int64_t drain_timeout_ms = 10'000;
  // Defaults to {data_dir}/components.json.
  std::optional<std::filesystem::path> components_path;

  std::filesystem::path components_file() const {
    return components_path.value_or(data_dir / "components.json");
  }
  std::filesystem::path kg_dir() const { return data_dir / "kg"; }
  std::filesystem::path lexicon_dir() const { return data_dir / "lexicon"; }
  std::filesystem::path model_file() const { return data_dir / "model.json"; }
  std::filesystem::path profiles_file() const { return data_dir / "profiles.json"; }
  std::filesystem::path feedback_log() const { return data_dir / "feedback.jsonl"; }
  std::filesystem::path runs_dir() const { return data_dir / "runs"; }
  std::filesystem::path cache_dir() const { return data_dir / "cache"; }
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

// Applies `json` on top of defaults. Relative data_dir values resolve against
// `base_dir`. Throws kConfigInvalid whose subject is the offending key path
// ("cache.budget_bytes").
Config config_from_json(const Json& json,
                        const std::filesystem::path& base_dir = {});

// Resolution order: defaults, then the config file (explicit path, else
// PLUMBER_CONFIG), then PLUMBER_DATA_DIR and PLUMBER_COMPONENTS.
Config load_config(const std::optional<std::filesystem::path>& path,
                   const EnvLookup& env = process_env);

}  // namespace plumber

#endif  // PLUMBER_CONFIG_H_
