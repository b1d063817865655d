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

#ifndef PLUMBER_TESTS_SUPPORT_GATEWAY_FUZZ_H_
#define PLUMBER_TESTS_SUPPORT_GATEWAY_FUZZ_H_

#include <random>
#include <string>
#include <vector>

#include "plumber/service.h"
#include "support/test_support.h"

namespace plumber::testing {

// Random values of every JSON type, biased toward plausible field contents.
inline Json random_value(std::mt19937_64& rng, int depth = 0) {
  static const std::vector<std::string> strings = {
      "", "toykg", "dbpedia", "manual", "automatic", "accept", "reject",
      kFixtureText, kToyPipelineId, "rule-coref", "rule-extractor",
      "toykg-entity-linker", "toykg-relation-linker", "\xF0\x9F\x98\x80", "../x",
      "a+b+c@k", "run-0", std::string(300, 'x')};
  switch (std::uniform_int_distribution<int>(0, depth > 1 ? 5 : 7)(rng)) {
    case 0: return nullptr;
    case 1: return static_cast<bool>(rng() % 2);
    case 2: return std::uniform_int_distribution<std::int64_t>(-5, 5)(rng);
    case 3: return static_cast<double>(std::uniform_real_distribution<double>(-1e20, 1e20)(rng));
    case 4:
    case 5: return strings[std::uniform_int_distribution<std::size_t>(0, strings.size() - 1)(rng)];
    case 6: {
      Json a = Json::array();
      for (int i = std::uniform_int_distribution<int>(0, 3)(rng); i > 0; --i) {
        a.push_back(random_value(rng, depth + 1));
      }
      return a;
    }
    default: {
      Json o = Json::object();
      for (int i = std::uniform_int_distribution<int>(0, 3)(rng); i > 0; --i) {
        o["k" + std::to_string(i)] = random_value(rng, depth + 1);
      }
      return o;
    }
  }
}

struct FuzzCase {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

// A request following one of the documented shapes, with fields randomly
// dropped, retyped or replaced.
inline FuzzCase random_request(std::mt19937_64& rng, const std::string& known_run) {
  auto coin = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng) == 0; };
  auto field = [&](Json& body, const std::string& key, Json good) {
    if (coin(5)) return;                       // drop
    body[key] = coin(3) ? random_value(rng) : std::move(good);
  };
  FuzzCase c;
  Json body = Json::object();
  switch (std::uniform_int_distribution<int>(0, 8)(rng)) {
    case 0:
      c = {"GET", "/components", {}, ""};
      return c;
    case 1:
      c = {"GET", "/pipelines", {}, ""};
      if (!coin(3)) c.query["kg"] = random_value(rng).dump();
      return c;
    case 2:
      c = {"POST", "/pipelines/validate", {}, ""};
      if (coin(2)) {
        field(body, "pipeline_id", kToyPipelineId);
      } else {
        field(body, "coref", "rule-coref");
        field(body, "extractor", "rule-extractor");
        field(body, "linking", Json::array({"toykg-entity-linker", "toykg-relation-linker"}));
        field(body, "kg", "toykg");
      }
      break;
    case 3:
      c = {"POST", "/select", {}, ""};
      field(body, "text", kFixtureText);
      if (coin(2)) field(body, "kg", "toykg");
      break;
    case 4:
      c = {"POST", "/run", {}, ""};
      if (coin(2)) {
        field(body, "text", kFixtureText);
      } else {
        field(body, "file", Json{{"name", "a.txt"}, {"content", kFixtureText}});
      }
      if (coin(3)) field(body, "text", "Einstein developed relativity.");
      field(body, "mode", coin(2) ? "manual" : "automatic");
      if (coin(2)) field(body, "pipeline_id", kToyPipelineId);
      if (coin(3)) {
        field(body, "components",
              Json{{"coref", "rule-coref"},
                   {"extractor", "rule-extractor"},
                   {"linking", {"toykg-entity-linker", "toykg-relation-linker"}}});
      }
      if (coin(2)) field(body, "kg", "toykg");
      break;
    case 5:
      c = {"GET", "/runs/" + (coin(2) ? known_run : random_value(rng).dump()), {}, ""};
      return c;
    case 6:
      c = {"POST", "/feedback", {}, ""};
      field(body, "run_id", known_run);
      field(body, "triple_index", std::uniform_int_distribution<int>(-1, 3)(rng));
      field(body, "verdict", coin(2) ? "accept" : "reject");
      if (coin(3)) field(body, "pipeline_id", kToyPipelineId);
      break;
    case 7:
      c = {coin(2) ? "GET" : "POST", coin(2) ? "/profiles" : "/health", {}, ""};
      return c;
    default:
      c = {"POST", "/run", {}, ""};
      c.body = coin(2) ? "{\"text\": " : random_value(rng).dump();
      return c;
  }
  if (coin(6)) {
    body[std::string("extra") + std::to_string(rng() % 3)] = random_value(rng);
  }
  c.body = coin(12) ? random_value(rng).dump() : body.dump();
  return c;
}

}  // namespace plumber::testing

#endif  // PLUMBER_TESTS_SUPPORT_GATEWAY_FUZZ_H_
