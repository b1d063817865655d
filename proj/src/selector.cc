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

#include "plumber/selector.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "plumber/error.h"
#include "plumber/text.h"

namespace plumber {

namespace {

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

bool HasDigit(std::u32string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char32_t c) { return c >= U'0' && c <= U'9'; });
}

void CheckHyperparameters(const Hyperparameters& hp) {
  if (!(hp.learning_rate > 0.0) || !std::isfinite(hp.learning_rate)) {
    throw Error(ErrorCode::kInvalidRequest, "learning rate must be positive",
                "eta");
  }
  if (!(hp.l2 >= 0.0) || !std::isfinite(hp.l2)) {
    throw Error(ErrorCode::kInvalidRequest, "l2 strength must be non-negative",
                "lambda");
  }
  if (hp.epochs < 0) {
    throw Error(ErrorCode::kInvalidRequest, "epochs must be non-negative",
                "epochs");
  }
  if (hp.hash_dim == 0) {
    throw Error(ErrorCode::kInvalidRequest, "hash dimension must be positive",
                "hash_dim");
  }
}

void CheckShapes(const SelectorModel& model, const TrainingSet& set) {
  const auto p = static_cast<Eigen::Index>(model.pipeline_ids.size());
  if (model.weights.rows() != p || model.bias.size() != p ||
      set.targets.cols() != p) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pipeline count differs between model and training set", "P");
  }
  if (set.features.cols() != model.weights.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature dimension differs between model and training set", "D");
  }
  if (set.features.rows() != set.targets.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature and target row counts differ", "N");
  }
}

Eigen::MatrixXd Residuals(const SelectorModel& model, const TrainingSet& set) {
  Eigen::MatrixXd pred = set.features * model.weights.transpose();
  pred.rowwise() += model.bias.transpose();
  return pred - set.targets;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

Eigen::VectorXd featurize(std::string_view text, std::size_t hash_dim) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(kHandcraftedFeatures + hash_dim));
  const std::u32string decoded = decode_utf8(text);
  const TokenizedText tokenized = tokenize(decoded);
  const auto& tokens = tokenized.tokens;
  if (tokens.empty()) return x;

  const double n = static_cast<double>(tokens.size());
  const double sentences = static_cast<double>(tokenized.sentence_count);
  double pronouns = 0, capitalized = 0, digits = 0;
  Eigen::VectorXd bag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hash_dim));
  for (const auto& t : tokens) {
    if (is_pronoun(t.lower)) ++pronouns;
    if (t.capitalized) ++capitalized;
    if (HasDigit(t.text)) ++digits;
    bag[static_cast<Eigen::Index>(fnv1a64(t.lower) % hash_dim)] += 1.0;
  }
  const double commas =
      static_cast<double>(std::count(decoded.begin(), decoded.end(), U','));

  x[0] = Clamp01(n / 100.0);
  x[1] = Clamp01(sentences / 10.0);
  x[2] = Clamp01(pronouns / 10.0);
  x[3] = Clamp01(pronouns / n);
  x[4] = Clamp01(capitalized / n);
  x[5] = Clamp01(digits / n);
  x[6] = sentences > 0 ? Clamp01(n / sentences / 50.0) : 0.0;
  x[7] = Clamp01(commas / n);
  const double norm = bag.norm();
  if (norm > 0) bag /= norm;
  x.tail(static_cast<Eigen::Index>(hash_dim)) = bag;
  return x;
}

Eigen::VectorXd SelectorModel::predict(const Eigen::VectorXd& x) const {
  return weights * x + bias;
}

SelectorModel SelectorModel::Zero(std::vector<std::string> pipeline_ids,
                                  std::size_t features, Hyperparameters hp) {
  SelectorModel m;
  const auto p = static_cast<Eigen::Index>(pipeline_ids.size());
  m.pipeline_ids = std::move(pipeline_ids);
  m.weights = Eigen::MatrixXd::Zero(p, static_cast<Eigen::Index>(features));
  m.bias = Eigen::VectorXd::Zero(p);
  m.hyperparameters = hp;
  return m;
}

void validate_training_set(const TrainingSet& set, std::size_t pipelines) {
  if (set.features.rows() != set.targets.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature and target row counts differ", "N");
  }
  if (static_cast<std::size_t>(set.targets.cols()) != pipelines) {
    throw Error(ErrorCode::kDimensionMismatch,
                "target width differs from the pipeline count", "P");
  }
  if (set.targets.size() > 0 &&
      (set.targets.minCoeff() < 0.0 || set.targets.maxCoeff() > 1.0)) {
    throw Error(ErrorCode::kInvalidRequest, "targets must lie in [0,1]", "y");
  }
}

double loss(const SelectorModel& model, const TrainingSet& set) {
  CheckShapes(model, set);
  const double n = static_cast<double>(std::max<std::size_t>(set.size(), 1));
  const double data = Residuals(model, set).squaredNorm() / (2.0 * n);
  const double reg =
      0.5 * model.hyperparameters.l2 * model.weights.squaredNorm();
  return data + reg;
}

Gradient gradient(const SelectorModel& model, const TrainingSet& set) {
  CheckShapes(model, set);
  const double n = static_cast<double>(std::max<std::size_t>(set.size(), 1));
  const Eigen::MatrixXd residuals = Residuals(model, set);  // N x P
  Gradient g;
  g.weights = residuals.transpose() * set.features / n +
              model.hyperparameters.l2 * model.weights;
  g.bias = residuals.colwise().sum().transpose() / n;
  return g;
}

TrainResult train(const TrainingSet& set, std::vector<std::string> pipeline_ids,
                  const Hyperparameters& hp) {
  CheckHyperparameters(hp);
  if (set.size() == 0 || pipeline_ids.empty()) {
    throw Error(ErrorCode::kInvalidRequest,
                "training needs at least one example and one pipeline", "N");
  }
  validate_training_set(set, pipeline_ids.size());

  TrainResult out;
  out.model = SelectorModel::Zero(std::move(pipeline_ids),
                                  static_cast<std::size_t>(set.features.cols()), hp);
  SelectorModel& model = out.model;

  TrainingSet work = set;
  std::mt19937_64 rng(hp.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(set.size()));
  std::iota(order.begin(), order.end(), 0);

  auto record = [&](double l) {
    if (!std::isfinite(l)) {
      throw Error(ErrorCode::kDivergenceDetected,
                  "training loss became non-finite; lower the learning rate",
                  "eta");
    }
    out.loss_trajectory.push_back(l);
  };

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    if (hp.shuffle) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t i = 0; i < order.size(); ++i) {
        work.features.row(static_cast<Eigen::Index>(i)) = set.features.row(order[i]);
        work.targets.row(static_cast<Eigen::Index>(i)) = set.targets.row(order[i]);
      }
    }
    record(loss(model, work));
    const Gradient g = gradient(model, work);
    model.weights -= hp.learning_rate * g.weights;
    model.bias -= hp.learning_rate * g.bias;
  }
  record(loss(model, set));
  return out;
}

Json model_to_json(const SelectorModel& model) {
  Json w = Json::array();
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c) {
      row.push_back(model.weights(r, c));
    }
    w.push_back(std::move(row));
  }
  Json b = Json::array();
  for (Eigen::Index r = 0; r < model.bias.size(); ++r) b.push_back(model.bias[r]);
  const auto& hp = model.hyperparameters;
  return Json{{"pipeline_ids", model.pipeline_ids},
              {"W", w},
              {"b", b},
              {"hyperparameters",
               {{"eta", hp.learning_rate},
                {"lambda", hp.l2},
                {"epochs", hp.epochs},
                {"seed", hp.seed},
                {"hash_dim", hp.hash_dim},
                {"shuffle", hp.shuffle}}},
              {"feature_layout_version", kFeatureLayoutVersion}};
}

SelectorModel model_from_json(const Json& j) {
  auto bad = [](const std::string& why) {
    return Error(ErrorCode::kInvalidModel, "model file: " + why);
  };
  try {
    if (j.at("feature_layout_version").get<int>() != kFeatureLayoutVersion) {
      throw bad("unsupported feature layout version");
    }
    SelectorModel m;
    m.pipeline_ids = j.at("pipeline_ids").get<std::vector<std::string>>();
    const Json& hp = j.at("hyperparameters");
    m.hyperparameters.learning_rate = hp.at("eta").get<double>();
    m.hyperparameters.l2 = hp.at("lambda").get<double>();
    m.hyperparameters.epochs = hp.at("epochs").get<int>();
    m.hyperparameters.seed = hp.at("seed").get<std::uint64_t>();
    m.hyperparameters.hash_dim = hp.at("hash_dim").get<std::size_t>();
    m.hyperparameters.shuffle = hp.value("shuffle", false);

    const auto p = static_cast<Eigen::Index>(m.pipeline_ids.size());
    const auto d = static_cast<Eigen::Index>(kHandcraftedFeatures +
                                             m.hyperparameters.hash_dim);
    const Json& w = j.at("W");
    const Json& b = j.at("b");
    if (static_cast<Eigen::Index>(w.size()) != p ||
        static_cast<Eigen::Index>(b.size()) != p) {
      throw bad("W and b must have one row per pipeline");
    }
    m.weights.resize(p, d);
    m.bias.resize(p);
    for (Eigen::Index r = 0; r < p; ++r) {
      const Json& row = w[static_cast<std::size_t>(r)];
      if (static_cast<Eigen::Index>(row.size()) != d) {
        throw bad("W row width must be 8 + hash_dim");
      }
      for (Eigen::Index c = 0; c < d; ++c) {
        m.weights(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
      m.bias[r] = b[static_cast<std::size_t>(r)].get<double>();
    }
    return m;
  } catch (const Json::exception& e) {
    throw bad(e.what());
  }
}

void save_model(const std::filesystem::path& path, const SelectorModel& model) {
  std::ofstream out(path, std::ios::trunc);
  out << model_to_json(model).dump() << '\n';
  if (!out) {
    throw Error(ErrorCode::kInternal, "cannot write " + path.string(),
                path.string());
  }
}

SelectorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kModelMissing, "no model at " + path.string(),
                path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  Json j;
  try {
    j = Json::parse(content);
  } catch (const Json::parse_error&) {
    throw Error(ErrorCode::kInvalidModel, "model file is not valid JSON",
                path.string());
  }
  return model_from_json(j);
}

Selection select_manual(const Registry& registry,
                        const PipelineSelection& selection) {
  return Selection{registry.validate_manual_selection(
                       selection.coref, selection.extractor, selection.linking,
                       selection.kg),
                   {}};
}

Selection select_automatic(const Registry& registry, const SelectorModel* model,
                           std::string_view text,
                           const std::optional<std::string>& kg,
                           const ScoreAdjuster& adjust) {
  if (model == nullptr) {
    throw Error(ErrorCode::kModelMissing, "no selector model is loaded");
  }
  const std::size_t hash_dim = model->hyperparameters.hash_dim;
  if (model->features() != kHandcraftedFeatures + hash_dim) {
    throw Error(ErrorCode::kInvalidModel, "model feature width mismatch");
  }
  auto pool = registry.enumerate_pipelines();
  std::map<std::string, const Pipeline*> by_id;
  for (const auto& p : pool->pipelines) by_id[p.id] = &p;
  for (const auto& id : model->pipeline_ids) {
    if (!by_id.contains(id)) {
      throw Error(ErrorCode::kInvalidModel,
                  "model pipeline '" + id + "' is not in the current pool", id);
    }
  }

  const Eigen::VectorXd raw = model->predict(featurize(text, hash_dim));
  Selection selection;
  const Pipeline* best = nullptr;
  double best_score = 0.0;
  for (std::size_t i = 0; i < model->pipeline_ids.size(); ++i) {
    const std::string& id = model->pipeline_ids[i];
    double score = Clamp01(raw[static_cast<Eigen::Index>(i)]);
    if (adjust) score = Clamp01(adjust(id, score));
    selection.scores[id] = score;
    const Pipeline* p = by_id[id];
    if (kg && p->kg != *kg) continue;
    if (best == nullptr || score > best_score ||
        (score == best_score && id < best->id)) {
      best = p;
      best_score = score;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kNoPipelineMatchesConstraints,
                "no scored pipeline aligns to KG '" + kg.value_or("") + "'",
                kg.value_or(""));
  }
  selection.pipeline = *best;
  return selection;
}

}  // namespace plumber
