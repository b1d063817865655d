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

#include <chrono>
#include <random>

#include "plumber/error.h"
#include "plumber/selector.h"
#include "support/oracles.h"
#include "support/test_support.h"

namespace plumber {
namespace {

namespace t = plumber::testing;

Eigen::MatrixXd RandomMatrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                             double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

std::vector<std::string> Ids(std::size_t p) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < p; ++i) ids.push_back("p" + std::to_string(i));
  return ids;
}

TEST(Featurize, Examples) {
  Eigen::VectorXd empty = featurize("");
  EXPECT_EQ(empty.size(), 8 + 256);
  EXPECT_EQ(empty.norm(), 0.0);

  Eigen::VectorXd x = featurize("He runs.");
  EXPECT_DOUBLE_EQ(x[2], 0.1);  // one pronoun / 10
  EXPECT_DOUBLE_EQ(x[1], 0.1);  // one sentence / 10
  EXPECT_DOUBLE_EQ(x[0], 0.02);
  EXPECT_DOUBLE_EQ(x[3], 0.5);
  EXPECT_NEAR(x.tail(256).norm(), 1.0, 1e-12);
  EXPECT_EQ(featurize("He runs."), x);
  for (Eigen::Index i = 0; i < 8; ++i) {
    EXPECT_GE(x[i], 0.0);
    EXPECT_LE(x[i], 1.0);
  }
}

TEST(Featurize, HashSlotsMatchFnv) {
  // FNV-1a 64 reference value for "a".
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  Eigen::VectorXd x = featurize("a a b", 16);
  const auto slot_a = static_cast<Eigen::Index>(8 + fnv1a64("a") % 16);
  const auto slot_b = static_cast<Eigen::Index>(8 + fnv1a64("b") % 16);
  if (slot_a != slot_b) {
    EXPECT_NEAR(x[slot_a], 2.0 / std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(x[slot_b], 1.0 / std::sqrt(5.0), 1e-12);
  }
}

TEST(Loss, Examples) {
  TrainingSet one{Eigen::MatrixXd::Zero(1, 3), Eigen::MatrixXd::Zero(1, 2)};
  SelectorModel zero = SelectorModel::Zero(Ids(2), 3);
  zero.hyperparameters.l2 = 0.0;
  EXPECT_EQ(loss(zero, one), 0.0);

  Eigen::MatrixXd y(1, 2);
  y << 0.5, 0.5;  // ||y||^2 = 0.5
  TrainingSet half{Eigen::MatrixXd::Zero(1, 3), y};
  EXPECT_DOUBLE_EQ(loss(zero, half), 0.25);

  std::mt19937_64 rng(1);
  SelectorModel w = zero;
  w.weights = RandomMatrix(rng, 2, 3);
  const double plain = loss(w, half);
  w.hyperparameters.l2 = 0.3;
  EXPECT_NEAR(loss(w, half) - plain, 0.15 * w.weights.squaredNorm(), 1e-12);
  EXPECT_GT(loss(w, half), plain);
}

TEST(Loss, DimensionMismatch) {
  SelectorModel m = SelectorModel::Zero(Ids(2), 3);
  TrainingSet bad{Eigen::MatrixXd::Zero(2, 4), Eigen::MatrixXd::Zero(2, 2)};
  try {
    loss(m, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(42);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int trial = 0; trial < 50; ++trial) {
    const int p = pick(1, 4), d = pick(1, 16), n = pick(1, 8);
    SelectorModel m = SelectorModel::Zero(Ids(static_cast<std::size_t>(p)),
                                          static_cast<std::size_t>(d));
    m.weights = RandomMatrix(rng, p, d);
    m.bias = RandomMatrix(rng, p, 1);
    m.hyperparameters.l2 = std::uniform_real_distribution<double>(0.0, 0.1)(rng);
    TrainingSet set{RandomMatrix(rng, n, d, 0.0, 1.0), RandomMatrix(rng, n, p, 0.0, 1.0)};
    EXPECT_NEAR(loss(m, set),
                t::loop_loss(m.weights, m.bias, m.hyperparameters.l2, set.features,
                             set.targets),
                1e-12);
    Gradient g = gradient(m, set);
    auto fd = t::finite_difference_gradient(m.weights, m.bias, m.hyperparameters.l2,
                                            set.features, set.targets, 1e-5);
    EXPECT_LT(t::max_relative_error(g.weights, fd.weights), 1e-5) << "trial " << trial;
    EXPECT_LT(t::max_relative_error(g.bias, fd.bias), 1e-5) << "trial " << trial;
  }
}

TEST(Train, ZeroEpochsReturnsZeroModel) {
  TrainingSet set{Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Constant(2, 2, 0.5)};
  Hyperparameters hp;
  hp.epochs = 0;
  TrainResult r = train(set, Ids(2), hp);
  EXPECT_EQ(r.model.weights, Eigen::MatrixXd::Zero(2, 3));
  EXPECT_EQ(r.model.bias, Eigen::VectorXd::Zero(2));
  ASSERT_EQ(r.loss_trajectory.size(), 1u);
}

TEST(Train, PlantedModelRecovery) {
  std::mt19937_64 rng(9);
  const int n = 64, d = 16, p = 3;
  // Nonnegative weights summing below 1 keep y inside [0,1].
  Eigen::MatrixXd w_star = RandomMatrix(rng, p, d, 0.0, 1.0 / d);
  Eigen::MatrixXd x = RandomMatrix(rng, n, d, 0.0, 1.0);
  TrainingSet set{x, x * w_star.transpose()};
  Hyperparameters hp;
  hp.learning_rate = 0.1;
  hp.l2 = 0.0;
  hp.epochs = 2000;
  auto start = std::chrono::steady_clock::now();
  TrainResult r = train(set, Ids(p), hp);
  auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(r.loss_trajectory.back(), 1e-4);
  EXPECT_LT(seconds, 30.0);
}

TEST(Train, LossNonIncreasingForSmallStep) {
  std::mt19937_64 rng(13);
  TrainingSet set{RandomMatrix(rng, 8, 6, 0.0, 1.0), RandomMatrix(rng, 8, 3, 0.0, 1.0)};
  Hyperparameters hp;
  hp.learning_rate = 1e-3;
  hp.epochs = 300;
  TrainResult r = train(set, Ids(3), hp);
  for (std::size_t i = 2; i < r.loss_trajectory.size(); ++i) {
    EXPECT_LE(r.loss_trajectory[i], r.loss_trajectory[i - 1] + 1e-15);
  }
}

TEST(Train, DivergenceDetected) {
  TrainingSet set{Eigen::MatrixXd::Constant(4, 4, 1.0), Eigen::MatrixXd::Constant(4, 1, 1.0)};
  Hyperparameters hp;
  hp.learning_rate = 1e6;
  hp.epochs = 200;
  try {
    train(set, Ids(1), hp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergenceDetected);
  }
}

TEST(Train, Deterministic) {
  std::mt19937_64 rng(2);
  TrainingSet set{RandomMatrix(rng, 8, 5, 0.0, 1.0), RandomMatrix(rng, 8, 2, 0.0, 1.0)};
  Hyperparameters hp;
  hp.shuffle = true;
  hp.seed = 77;
  hp.epochs = 50;
  auto a = train(set, Ids(2), hp);
  auto b = train(set, Ids(2), hp);
  EXPECT_EQ(a.model.weights, b.model.weights);
  EXPECT_EQ(a.loss_trajectory, b.loss_trajectory);
}

TEST(Model, PersistenceRoundTrip) {
  std::mt19937_64 rng(4);
  SelectorModel m = SelectorModel::Zero(Ids(2), 8 + 256);
  m.weights = RandomMatrix(rng, 2, 8 + 256);
  m.bias = RandomMatrix(rng, 2, 1);
  m.hyperparameters.seed = 99;
  t::TempDir dir;
  save_model(dir.path() / "model.json", m);
  SelectorModel back = load_model(dir.path() / "model.json");
  EXPECT_EQ(back.pipeline_ids, m.pipeline_ids);
  EXPECT_EQ(back.hyperparameters.seed, 99u);
  const auto x = featurize(t::kFixtureText);
  EXPECT_EQ(back.predict(x), m.predict(x));  // bit-identical

  Json j = model_to_json(m);
  for (const char* key : {"pipeline_ids", "W", "b", "hyperparameters", "feature_layout_version"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  for (const char* key : {"eta", "lambda", "epochs", "seed", "hash_dim"}) {
    EXPECT_TRUE(j["hyperparameters"].contains(key)) << key;
  }
  try {
    load_model(dir.path() / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModelMissing);
  }
}

class SelectTest : public ::testing::Test {
 protected:
  SelectTest() {
    t::register_toy(registry_);
    registry_.register_component(
        t::native("identity-coref", TaskKind::kCoref, "identity_coref"));
    registry_.register_component(
        t::native("el-db", TaskKind::kEntityLinking, "x", {"dbpedia"}));
    registry_.register_component(
        t::native("rl-db", TaskKind::kRelationLinking, "x", {"dbpedia"}));
    for (const auto& p : registry_.enumerate_pipelines()->pipelines) ids_.push_back(p.id);
  }

  SelectorModel Constant(std::vector<double> b) const {
    SelectorModel m = SelectorModel::Zero(ids_, 8 + 256);
    m.bias = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    return m;
  }

  Registry registry_;
  std::vector<std::string> ids_;
};

TEST_F(SelectTest, ManualPassThrough) {
  PipelineSelection sel = parse_pipeline_id(t::kToyPipelineId);
  Selection s = select_manual(registry_, sel);
  EXPECT_EQ(s.pipeline.id, t::kToyPipelineId);
  EXPECT_TRUE(s.scores.empty());
}

TEST_F(SelectTest, ArgmaxOfConstants) {
  ASSERT_EQ(ids_.size(), 4u);
  SelectorModel m = Constant({0.9, 0.1, 0.1, 0.1});
  for (const char* text : {"", "He runs.", t::kFixtureText}) {
    Selection s = select_automatic(registry_, &m, text);
    EXPECT_EQ(s.pipeline.id, ids_[0]);
    EXPECT_EQ(s.scores.size(), 4u);
    EXPECT_DOUBLE_EQ(s.scores[ids_[0]], 0.9);
  }
}

TEST_F(SelectTest, ShiftInvariance) {
  SelectorModel m = Constant({0.2, 0.5, 0.3, 0.1});
  const auto before = select_automatic(registry_, &m, "x").pipeline.id;
  m.bias.array() += 0.3;
  EXPECT_EQ(select_automatic(registry_, &m, "x").pipeline.id, before);
}

TEST_F(SelectTest, TiesAndClipping) {
  SelectorModel m = Constant({1.5, 2.0, 0.1, 0.1});
  Selection s = select_automatic(registry_, &m, "x");
  // Both clip to 1; the smaller id wins.
  EXPECT_EQ(s.pipeline.id, std::min(ids_[0], ids_[1]));
  EXPECT_DOUBLE_EQ(s.scores[ids_[1]], 1.0);
}

TEST_F(SelectTest, KgConstraintAndErrors) {
  SelectorModel m = Constant({0.9, 0.8, 0.1, 0.2});
  Selection s = select_automatic(registry_, &m, "x", std::string("toykg"));
  EXPECT_EQ(s.pipeline.kg, "toykg");
  auto code = [&](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code([&] { select_automatic(registry_, &m, "x", std::string("wikidata")); }),
            ErrorCode::kNoPipelineMatchesConstraints);
  EXPECT_EQ(code([&] { select_automatic(registry_, nullptr, "x"); }), ErrorCode::kModelMissing);
  SelectorModel stranger = SelectorModel::Zero({"a+b+c@kg"}, 8 + 256);
  EXPECT_EQ(code([&] { select_automatic(registry_, &stranger, "x"); }),
            ErrorCode::kInvalidModel);
  SelectorModel narrow = SelectorModel::Zero(ids_, 5);
  EXPECT_EQ(code([&] { select_automatic(registry_, &narrow, "x"); }), ErrorCode::kInvalidModel);
}

TEST_F(SelectTest, AdjusterBlendsScores) {
  SelectorModel m = Constant({0.6, 0.5, 0.1, 0.1});
  Selection s = select_automatic(registry_, &m, "x", std::nullopt,
                                 [&](const std::string& id, double score) {
                                   return id == ids_[1] ? score + 0.2 : score;
                                 });
  EXPECT_EQ(s.pipeline.id, ids_[1]);
  EXPECT_DOUBLE_EQ(s.scores[ids_[1]], 0.7);
}

}  // namespace
}  // namespace plumber

namespace plumber {
namespace {

TEST_F(SelectTest, SeparableClusters) {
  std::mt19937_64 rng(21);
  auto corpus = t::separable_corpus(rng, 40);
  // Cluster 0 is best served by the first pipeline, cluster 1 by the second.
  const std::vector<std::string> two{ids_[0], ids_[1]};
  TrainingSet set{Eigen::MatrixXd(static_cast<Eigen::Index>(corpus.size()), 8 + 256),
                  Eigen::MatrixXd(static_cast<Eigen::Index>(corpus.size()), 2)};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    set.features.row(row) = featurize(corpus[i].text).transpose();
    set.targets(row, 0) = corpus[i].cluster == 0 ? 0.9 : 0.2;
    set.targets(row, 1) = corpus[i].cluster == 0 ? 0.3 : 0.8;
  }
  TrainResult r = train(set, two, Hyperparameters{});
  int agree = 0;
  for (const auto& doc : corpus) {
    Selection s = select_automatic(registry_, &r.model, doc.text);
    agree += s.pipeline.id == two[static_cast<std::size_t>(doc.cluster)];
  }
  EXPECT_GE(agree, static_cast<int>(0.95 * static_cast<double>(corpus.size())));
}

}  // namespace
}  // namespace plumber
