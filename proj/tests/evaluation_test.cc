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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "plumber/error.h"
#include "plumber/evaluation.h"
#include "plumber/runner.h"
#include "support/test_support.h"

namespace plumber {
namespace {

namespace t = plumber::testing;

LinkedTerm Term(const std::string& surface, const std::string& iri = "") {
  LinkedTerm term{Mention{surface, Span{0, surface.size()}}, std::nullopt, 0.0};
  if (!iri.empty()) {
    term.ref = KGRef{iri, "k"};
    term.confidence = 1.0;
  }
  return term;
}

AlignedTriple Linked(const std::string& s, const std::string& p, const std::string& o) {
  return {Term(s, "http://k/" + s), Term(p, "http://k/" + p), Term(o, "http://k/" + o)};
}

GoldTriple Gold(const std::string& s, const std::string& p, const std::string& o) {
  return {GoldTerm::Iri("http://k/" + s), GoldTerm::Iri("http://k/" + p),
          GoldTerm::Iri("http://k/" + o)};
}

TEST(Match, HandScoredFixture) {
  std::vector<AlignedTriple> predicted{Linked("a", "r", "b"), Linked("a", "r", "c"),
                                       Linked("x", "r", "y")};
  std::vector<GoldTriple> gold{Gold("a", "r", "b"), Gold("d", "r", "e")};
  EXPECT_EQ(match_triples(predicted, gold), (MatchCounts{1, 2, 1}));
}

TEST(Match, OneToOne) {
  std::vector<AlignedTriple> predicted{Linked("a", "r", "b"), Linked("a", "r", "b")};
  std::vector<GoldTriple> gold{Gold("a", "r", "b")};
  EXPECT_EQ(match_triples(predicted, gold), (MatchCounts{1, 1, 0}));
}

TEST(Match, SurfaceGold) {
  AlignedTriple p{Term("Newton", "http://k/newton"), Term("born  in"), Term("Woolsthorpe!")};
  GoldTriple g{GoldTerm::Iri("http://k/newton"), GoldTerm::Surface("Born in"),
               GoldTerm::Surface("woolsthorpe")};
  EXPECT_EQ(match_triples({p}, {g}), (MatchCounts{1, 0, 0}));
  // An unlinked term never matches IRI gold.
  GoldTriple iri_gold{GoldTerm::Iri("http://k/newton"), GoldTerm::Iri("http://k/born_in"),
                      GoldTerm::Surface("woolsthorpe")};
  EXPECT_EQ(match_triples({p}, {iri_gold}), (MatchCounts{0, 1, 1}));
}

TEST(Metrics, FixtureValues) {
  EvaluationReport r = report_from_counts({1, 2, 1});
  EXPECT_NEAR(r.precision, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.recall, 1.0 / 2.0, 1e-12);
  EXPECT_NEAR(r.f1, 0.4, 1e-12);
}

TEST(Metrics, ZeroDenominators) {
  EvaluationReport none = report_from_counts({0, 0, 0});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  EvaluationReport miss = report_from_counts({0, 0, 3});
  EXPECT_EQ(miss.recall, 0.0);
  EXPECT_EQ(miss.f1, 0.0);
}

TEST(Metrics, MicroAveragingIdentityRandomized) {
  std::mt19937_64 rng(5);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int corpus = 0; corpus < 100; ++corpus) {
    const int docs = pick(1, 8);
    std::vector<MatchCounts> per_doc;
    std::vector<AlignedTriple> all_pred;
    std::vector<GoldTriple> all_gold;
    for (int d = 0; d < docs; ++d) {
      const std::string tag = "d" + std::to_string(d) + "-";
      std::vector<AlignedTriple> pred;
      std::vector<GoldTriple> gold;
      for (int i = pick(0, 5); i > 0; --i) {
        auto e = tag + std::to_string(pick(0, 3));
        pred.push_back(Linked(e, "r", tag + std::to_string(pick(0, 3))));
      }
      for (int i = pick(0, 5); i > 0; --i) {
        auto e = tag + std::to_string(pick(0, 3));
        gold.push_back(Gold(e, "r", tag + std::to_string(pick(0, 3))));
      }
      MatchCounts c = match_triples(pred, gold);
      EXPECT_LE(c.tp, std::min(pred.size(), gold.size()));
      EXPECT_EQ(c.tp + c.fp, pred.size());
      EXPECT_EQ(c.tp + c.fn, gold.size());
      per_doc.push_back(c);
      all_pred.insert(all_pred.end(), pred.begin(), pred.end());
      all_gold.insert(all_gold.end(), gold.begin(), gold.end());
    }
    EvaluationReport micro = micro_metrics(per_doc);
    // Document tags keep triples from matching across documents, so scoring
    // the concatenation must give the same totals.
    MatchCounts pooled = match_triples(all_pred, all_gold);
    EXPECT_EQ(micro.tp, pooled.tp);
    EXPECT_EQ(micro.fp, pooled.fp);
    EXPECT_EQ(micro.fn, pooled.fn);
    const double tp = static_cast<double>(pooled.tp);
    const double p = tp + pooled.fp ? tp / static_cast<double>(pooled.tp + pooled.fp) : 0.0;
    const double r = tp + pooled.fn ? tp / static_cast<double>(pooled.tp + pooled.fn) : 0.0;
    const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    EXPECT_NEAR(micro.precision, p, 1e-12);
    EXPECT_NEAR(micro.recall, r, 1e-12);
    EXPECT_NEAR(micro.f1, f, 1e-12);
  }
}

TEST(Corpus, ParseAndErrors) {
  auto corpus = load_corpus(t::data_dir() / "corpus" / "toy.jsonl");
  ASSERT_EQ(corpus.size(), 5u);
  EXPECT_EQ(corpus[0].document.id, "toy-1");
  EXPECT_EQ(corpus[0].gold.size(), 2u);
  EXPECT_EQ(corpus[3].gold[1].predicate.kind, GoldTerm::Kind::kSurface);
  try {
    parse_corpus("{\"id\":\"a\",\"text\":\"x\",\"gold\":[]}\n{broken\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_EQ(e.subject(), "2");
  }
}

TEST(Benchmark, TwoNativePipelinesOnToyCorpus) {
  Registry registry;
  t::register_toy(registry);
  registry.register_component(t::native("identity-coref", TaskKind::kCoref, "identity_coref"));
  NativeHost native(t::toy_lexicon(), t::toy_snapshots());
  Runner runner(registry, native, {.cache_enabled = false});
  auto corpus = load_corpus(t::data_dir() / "corpus" / "toy.jsonl");
  const auto& pool = registry.enumerate_pipelines()->pipelines;
  ASSERT_EQ(pool.size(), 2u);
  auto profiles = benchmark(runner, pool, corpus);
  ASSERT_EQ(profiles.size(), 2u);

  // Hand-scored per document. Without coreference the second sentence of
  // toy-1, toy-3 and toy-4 starts with a pronoun (a stopword), so its triple
  // has no subject and is dropped.
  const std::vector<MatchCounts> identity{{1, 0, 1}, {1, 0, 0}, {1, 0, 1}, {1, 0, 1}, {1, 0, 0}};
  const std::vector<MatchCounts> rule{{2, 0, 0}, {1, 0, 0}, {2, 0, 0}, {2, 0, 0}, {1, 0, 0}};
  const PipelineProfile& id_profile = profiles[0];
  const PipelineProfile& rule_profile = profiles[1];
  ASSERT_EQ(id_profile.pipeline_id.substr(0, 14), "identity-coref");
  EXPECT_EQ(id_profile.per_document_counts, identity);
  EXPECT_EQ(rule_profile.per_document_counts, rule);
  EXPECT_NEAR(id_profile.per_document_f1[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(id_profile.report.f1, 10.0 / 13.0, 1e-12);
  EXPECT_NEAR(id_profile.report.recall, 5.0 / 8.0, 1e-12);
  EXPECT_NEAR(rule_profile.report.f1, 1.0, 1e-12);
  EXPECT_EQ(id_profile.document_ids,
            (std::vector<std::string>{"toy-1", "toy-2", "toy-3", "toy-4", "toy-5"}));

  t::TempDir dir;
  save_profiles(dir.path() / "profiles.json", profiles);
  auto loaded = load_profiles(dir.path() / "profiles.json");
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].per_document_counts, identity);
  EXPECT_EQ(loaded[1].per_document_f1, rule_profile.per_document_f1);
}

TEST(Benchmark, EmptyExtractorGivesZeroRecall) {
  Registry registry;
  t::register_toy(registry);
  NativeHost native(t::toy_lexicon(), t::toy_snapshots());
  Runner runner(registry, native, {.cache_enabled = false});
  std::vector<CorpusDocument> corpus{
      {Document{"d", "Colorless green ideas."},
       {GoldTriple{GoldTerm::Surface("a"), GoldTerm::Surface("b"), GoldTerm::Surface("c")}}}};
  auto profiles = benchmark(runner, registry.enumerate_pipelines()->pipelines, corpus);
  EXPECT_EQ(profiles[0].report.recall, 0.0);
  EXPECT_EQ(profiles[0].report.f1, 0.0);
}

TEST(Benchmark, FailedRunScoresZero) {
  Registry registry;
  t::register_toy(registry);
  registry.register_component(
      t::remote("dead-coref", TaskKind::kCoref, "http://127.0.0.1:1"));
  NativeHost native(t::toy_lexicon(), t::toy_snapshots());
  Runner runner(registry, native, {.cache_enabled = false});
  runner.set_remote_invoker([](const ComponentDescriptor& d, const InvocationPayload&,
                               std::int64_t) -> InvocationResult {
    throw Error(ErrorCode::kConnectionFailed, "down", d.id);
  });
  auto corpus = load_corpus(t::data_dir() / "corpus" / "toy.jsonl");
  auto profiles = benchmark(runner, registry.enumerate_pipelines()->pipelines, corpus);
  ASSERT_EQ(profiles.size(), 2u);
  EXPECT_EQ(profiles[0].pipeline_id.substr(0, 10), "dead-coref");
  EXPECT_EQ(profiles[0].failures, 5u);
  EXPECT_EQ(profiles[0].report.f1, 0.0);
  EXPECT_EQ(profiles[0].per_document_counts[0], (MatchCounts{0, 0, 2}));
  EXPECT_NEAR(profiles[1].report.f1, 1.0, 1e-12);
}

}  // namespace
}  // namespace plumber
