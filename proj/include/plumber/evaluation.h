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

#ifndef PLUMBER_EVALUATION_H_
#define PLUMBER_EVALUATION_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "plumber/core_model.h"
#include "plumber/json_codec.h"
#include "plumber/registry.h"

namespace plumber {

class Runner;

// A gold triple position is either a KG IRI or a plain surface string.
struct GoldTerm {
  enum class Kind { kIri, kSurface };
  Kind kind = Kind::kSurface;
  std::string value;

  static GoldTerm Iri(std::string v) { return {Kind::kIri, std::move(v)}; }
  static GoldTerm Surface(std::string v) { return {Kind::kSurface, std::move(v)}; }
};

struct GoldTriple {
  GoldTerm subject;
  GoldTerm predicate;
  GoldTerm object;
};

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct EvaluationReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

bool term_matches(const LinkedTerm& predicted, const GoldTerm& gold);

// Greedy one-to-one matching in prediction order.
MatchCounts match_triples(const std::vector<AlignedTriple>& predicted,
                          const std::vector<GoldTriple>& gold);

EvaluationReport report_from_counts(const MatchCounts& totals);

// Sums counts over documents, then computes P/R/F1 (micro averaging).
EvaluationReport micro_metrics(std::span<const MatchCounts> per_document);

struct CorpusDocument {
  Document document;
  std::vector<GoldTriple> gold;
};

// JSON Lines, one {"id","text","gold":[...]} per line. Throws kParseError
// whose subject is the line number.
std::vector<CorpusDocument> load_corpus(const std::filesystem::path& path);
std::vector<CorpusDocument> parse_corpus(std::string_view jsonl);

struct PipelineProfile {
  std::string pipeline_id;
  std::vector<std::string> document_ids;
  std::vector<double> per_document_f1;
  std::vector<MatchCounts> per_document_counts;
  EvaluationReport report;
  double mean_latency_ms = 0.0;
  std::size_t failures = 0;
};

// Runs every pipeline on every document; failed runs score f1 = 0 for that
// document and count all gold triples as false negatives.
std::vector<PipelineProfile> benchmark(const Runner& runner,
                                       const std::vector<Pipeline>& pipelines,
                                       const std::vector<CorpusDocument>& corpus);

Json profile_to_json(const PipelineProfile& p);
PipelineProfile profile_from_json(const Json& j);
void save_profiles(const std::filesystem::path& path,
                   const std::vector<PipelineProfile>& profiles);
std::vector<PipelineProfile> load_profiles(const std::filesystem::path& path);

}  // namespace plumber

#endif  // PLUMBER_EVALUATION_H_
