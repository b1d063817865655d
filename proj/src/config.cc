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

#include "plumber/config.h"

#include <cstdlib>
#include <fstream>

#include "plumber/error.h"

namespace plumber {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void Invalid(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::kConfigInvalid, "config key '" + key + "': " + why, key);
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

Config config_from_json(const Json& j, const fs::path& base_dir) {
  Config c;
  if (!j.is_object()) Invalid("", "config must be a JSON object");
  if (j.contains("port")) {
    const Json& v = j["port"];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
        v.get<std::int64_t>() > 65535) {
      Invalid("port", "must be an integer in [0, 65535]");
    }
    c.port = v.get<int>();
  }
  if (j.contains("data_dir")) {
    if (!j["data_dir"].is_string()) Invalid("data_dir", "must be a string");
    fs::path p = j["data_dir"].get<std::string>();
    c.data_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (j.contains("cache")) {
    const Json& cache = j["cache"];
    if (!cache.is_object()) Invalid("cache", "must be an object");
    if (cache.contains("enabled")) {
      if (!cache["enabled"].is_boolean()) Invalid("cache.enabled", "must be a boolean");
      c.cache_enabled = cache["enabled"].get<bool>();
    }
    if (cache.contains("budget_bytes")) {
      if (!cache["budget_bytes"].is_number_unsigned()) {
        Invalid("cache.budget_bytes", "must be a non-negative integer");
      }
      c.cache_budget_bytes = cache["budget_bytes"].get<std::uint64_t>();
    }
  }
  if (j.contains("selector")) {
    const Json& sel = j["selector"];
    if (!sel.is_object()) Invalid("selector", "must be an object");
    if (sel.contains("blend_feedback")) {
      if (!sel["blend_feedback"].is_boolean()) {
        Invalid("selector.blend_feedback", "must be a boolean");
      }
      c.blend_feedback = sel["blend_feedback"].get<bool>();
    }
    if (sel.contains("beta")) {
      if (!sel["beta"].is_number()) Invalid("selector.beta", "must be a number");
      c.beta = sel["beta"].get<double>();
      if (!(c.beta >= 0.0 && c.beta <= 1.0)) {
        Invalid("selector.beta", "must lie in [0,1]");
      }
    }
  }
  if (j.contains("ui_origin")) {
    if (!j["ui_origin"].is_string()) Invalid("ui_origin", "must be a string");
    c.ui_origin = j["ui_origin"].get<std::string>();
  }
  return c;
}

Config load_config(const std::optional<fs::path>& path, const EnvLookup& env) {
  std::optional<fs::path> file = path;
  if (!file) {
    if (auto p = env("PLUMBER_CONFIG")) file = fs::path(*p);
  }
  Config c;
  if (file) {
    std::ifstream in(*file);
    if (!in) Invalid("", "cannot open config file " + file->string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    Json j;
    try {
      j = Json::parse(content);
    } catch (const Json::parse_error&) {
      Invalid("", "config file is not valid JSON");
    }
    c = config_from_json(j, file->parent_path());
  }
  if (auto d = env("PLUMBER_DATA_DIR")) c.data_dir = *d;
  if (auto p = env("PLUMBER_COMPONENTS")) c.components_path = fs::path(*p);
  return c;
}

}  // namespace plumber
