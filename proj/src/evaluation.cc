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

#include "plumber/evaluation.h"

#include <fstream>
#include <sstream>

#include "plumber/error.h"
#include "plumber/runner.h"

namespace plumber {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

GoldTerm ParseGoldTerm(const Json& j, const char* position, std::size_t line) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kParseError,
                 "line " + std::to_string(line) + ": gold " + position + " " + why,
                 std::to_string(line));
  };
  if (!j.is_object()) throw fail("must be an object");
  if (j.contains("iri") && j["iri"].is_string()) {
    std::string v = j["iri"].get<std::string>();
    if (v.empty()) throw fail("IRI is empty");
    return GoldTerm::Iri(std::move(v));
  }
  if (j.contains("surface") && j["surface"].is_string()) {
    std::string v = j["surface"].get<std::string>();
    if (normalize_surface(v).empty()) throw fail("surface is empty");
    return GoldTerm::Surface(std::move(v));
  }
  throw fail("needs an 'iri' or 'surface' string");
}

}  // namespace

bool term_matches(const LinkedTerm& predicted, const GoldTerm& gold) {
  if (gold.kind == GoldTerm::Kind::kIri) {
    return predicted.ref.has_value() && predicted.ref->iri == gold.value;
  }
  return normalize_surface(predicted.mention.surface) ==
         normalize_surface(gold.value);
}

MatchCounts match_triples(const std::vector<AlignedTriple>& predicted,
                          const std::vector<GoldTriple>& gold) {
  std::vector<bool> used(gold.size(), false);
  MatchCounts counts;
  for (const auto& p : predicted) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (used[g]) continue;
      if (term_matches(p.subject, gold[g].subject) &&
          term_matches(p.predicate, gold[g].predicate) &&
          term_matches(p.object, gold[g].object)) {
        used[g] = true;
        ++counts.tp;
        break;
      }
    }
  }
  counts.fp = predicted.size() - counts.tp;
  counts.fn = gold.size() - counts.tp;
  return counts;
}

EvaluationReport report_from_counts(const MatchCounts& totals) {
  EvaluationReport r;
  r.tp = totals.tp;
  r.fp = totals.fp;
  r.fn = totals.fn;
  r.precision = Ratio(r.tp, r.tp + r.fp);
  r.recall = Ratio(r.tp, r.tp + r.fn);
  r.f1 = r.precision + r.recall == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

EvaluationReport micro_metrics(std::span<const MatchCounts> per_document) {
  MatchCounts totals;
  for (const auto& c : per_document) {
    totals.tp += c.tp;
    totals.fp += c.fp;
    totals.fn += c.fn;
  }
  return report_from_counts(totals);
}

std::vector<CorpusDocument> parse_corpus(std::string_view jsonl) {
  std::vector<CorpusDocument> corpus;
  std::istringstream in{std::string(jsonl)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(raw);
    } catch (const Json::parse_error&) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line) + ": invalid JSON",
                  std::to_string(line));
    }
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParseError,
                   "line " + std::to_string(line) + ": " + why,
                   std::to_string(line));
    };
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("text") || !j["text"].is_string()) {
      throw fail("needs string 'id' and 'text'");
    }
    CorpusDocument doc;
    doc.document.id = j["id"].get<std::string>();
    doc.document.text = j["text"].get<std::string>();
    doc.document.source = DocumentSource::kFile;
    if (j.contains("gold")) {
      if (!j["gold"].is_array()) throw fail("'gold' must be an array");
      for (const Json& g : j["gold"]) {
        if (!g.is_object() || !g.contains("subject") || !g.contains("predicate") ||
            !g.contains("object")) {
          throw fail("gold triples need subject, predicate and object");
        }
        doc.gold.push_back(GoldTriple{ParseGoldTerm(g["subject"], "subject", line),
                                      ParseGoldTerm(g["predicate"], "predicate", line),
                                      ParseGoldTerm(g["object"], "object", line)});
      }
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<CorpusDocument> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid, "cannot open corpus " + path.string(),
                path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return parse_corpus(content);
}

std::vector<PipelineProfile> benchmark(const Runner& runner,
                                       const std::vector<Pipeline>& pipelines,
                                       const std::vector<CorpusDocument>& corpus) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kInvalidRequest, "benchmark corpus is empty", "corpus");
  }
  std::vector<Runner::Job> jobs;
  jobs.reserve(pipelines.size() * corpus.size());
  for (const auto& p : pipelines) {
    for (const auto& doc : corpus) {
      jobs.push_back(Runner::Job{p, doc.document, RunMode::kManual});
    }
  }
  const std::vector<RunResult> runs = runner.run_batch(jobs);

  std::vector<PipelineProfile> profiles;
  for (std::size_t p = 0; p < pipelines.size(); ++p) {
    PipelineProfile profile;
    profile.pipeline_id = pipelines[p].id;
    double latency_sum = 0.0;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      const RunResult& run = runs[p * corpus.size() + d];
      MatchCounts counts = match_triples(run.triples, corpus[d].gold);
      if (!run.ok()) {
        ++profile.failures;
        counts = MatchCounts{0, 0, corpus[d].gold.size()};
      }
      profile.document_ids.push_back(corpus[d].document.id);
      profile.per_document_counts.push_back(counts);
      profile.per_document_f1.push_back(run.ok() ? report_from_counts(counts).f1
                                                 : 0.0);
      for (const auto& t : run.trace) {
        latency_sum += static_cast<double>(t.latency_ms);
      }
    }
    profile.report = micro_metrics(profile.per_document_counts);
    profile.mean_latency_ms = latency_sum / static_cast<double>(corpus.size());
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

Json profile_to_json(const PipelineProfile& p) {
  Json counts = Json::array();
  for (const auto& c : p.per_document_counts) {
    counts.push_back({{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}});
  }
  return Json{{"pipeline_id", p.pipeline_id},
              {"document_ids", p.document_ids},
              {"per_document_f1", p.per_document_f1},
              {"per_document_counts", counts},
              {"report",
               {{"tp", p.report.tp},
                {"fp", p.report.fp},
                {"fn", p.report.fn},
                {"precision", p.report.precision},
                {"recall", p.report.recall},
                {"f1", p.report.f1}}},
              {"mean_latency_ms", p.mean_latency_ms},
              {"failures", p.failures}};
}

PipelineProfile profile_from_json(const Json& j) {
  try {
    PipelineProfile p;
    p.pipeline_id = j.at("pipeline_id").get<std::string>();
    p.document_ids = j.value("document_ids", std::vector<std::string>{});
    p.per_document_f1 = j.at("per_document_f1").get<std::vector<double>>();
    if (j.contains("per_document_counts")) {
      for (const auto& c : j["per_document_counts"]) {
        p.per_document_counts.push_back(MatchCounts{c.at("tp").get<std::size_t>(),
                                                    c.at("fp").get<std::size_t>(),
                                                    c.at("fn").get<std::size_t>()});
      }
    }
    const Json& r = j.at("report");
    p.report.tp = r.at("tp").get<std::size_t>();
    p.report.fp = r.at("fp").get<std::size_t>();
    p.report.fn = r.at("fn").get<std::size_t>();
    p.report.precision = r.at("precision").get<double>();
    p.report.recall = r.at("recall").get<double>();
    p.report.f1 = r.at("f1").get<double>();
    p.mean_latency_ms = j.value("mean_latency_ms", 0.0);
    p.failures = j.value("failures", std::size_t{0});
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed profile: ") + e.what());
  }
}

void save_profiles(const std::filesystem::path& path,
                   const std::vector<PipelineProfile>& profiles) {
  Json arr = Json::array();
  for (const auto& p : profiles) arr.push_back(profile_to_json(p));
  std::ofstream out(path, std::ios::trunc);
  out << arr.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorCode::kInternal, "cannot write " + path.string(),
                path.string());
  }
}

std::vector<PipelineProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid,
                "cannot open profiles " + path.string(), path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  Json arr = parse_json_document(content);
  if (!arr.is_array()) {
    throw Error(ErrorCode::kParseError, "profiles file must hold an array");
  }
  std::vector<PipelineProfile> out;
  for (const auto& j : arr) out.push_back(profile_from_json(j));
  return out;
}

}  // namespace plumber
