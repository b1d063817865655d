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

#ifndef PLUMBER_SELECTOR_H_
#define PLUMBER_SELECTOR_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "plumber/json_codec.h"
#include "plumber/registry.h"

namespace plumber {

// Automatic pipeline composition: a linear multi-output regressor predicts
// each pipeline's micro F1 from text features; the argmax is selected.

inline constexpr std::size_t kHandcraftedFeatures = 8;
inline constexpr std::size_t kDefaultHashDim = 256;
inline constexpr int kFeatureLayoutVersion = 1;

// Maps input text to a fixed-size feature vector. The shipped encoder is
// featurize(); other encoders (e.g. remote embeddings) plug in here.
class TextEncoder {
 public:
  virtual ~TextEncoder() = default;
  virtual Eigen::VectorXd encode(std::string_view text) const = 0;
  virtual std::size_t dimension() const = 0;
};

// Layout: [token_count/100, sentence_count/10, pronoun_count/10,
// pronoun_density, capitalized_ratio, digit_ratio, mean_sentence_length/50,
// comma_density] (each clamped to [0,1]) followed by `hash_dim` FNV-1a
// bag-of-token counts, L2-normalized.
Eigen::VectorXd featurize(std::string_view text,
                          std::size_t hash_dim = kDefaultHashDim);

std::uint64_t fnv1a64(std::string_view bytes);

class HashedBagEncoder final : public TextEncoder {
 public:
  explicit HashedBagEncoder(std::size_t hash_dim = kDefaultHashDim)
      : hash_dim_(hash_dim) {}
  Eigen::VectorXd encode(std::string_view text) const override {
    return featurize(text, hash_dim_);
  }
  std::size_t dimension() const override {
    return kHandcraftedFeatures + hash_dim_;
  }

 private:
  std::size_t hash_dim_;
};

struct Hyperparameters {
  double learning_rate = 0.05;
  double l2 = 1e-4;
  int epochs = 500;
  std::uint64_t seed = 0;
  std::size_t hash_dim = kDefaultHashDim;
  bool shuffle = false;
};

struct SelectorModel {
  std::vector<std::string> pipeline_ids;
  Eigen::MatrixXd weights;  // P x D
  Eigen::VectorXd bias;     // P
  Hyperparameters hyperparameters;

  std::size_t pipelines() const { return pipeline_ids.size(); }
  std::size_t features() const { return static_cast<std::size_t>(weights.cols()); }

  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;

  static SelectorModel Zero(std::vector<std::string> pipeline_ids,
                            std::size_t features, Hyperparameters hp = {});
};

// Rows of `features` and `targets` are examples; targets hold per-pipeline
// micro F1 in [0,1].
struct TrainingSet {
  Eigen::MatrixXd features;  // N x D
  Eigen::MatrixXd targets;   // N x P

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
};

// Throws kDimensionMismatch or kInvalidRequest (targets outside [0,1]).
void validate_training_set(const TrainingSet& set, std::size_t pipelines);

// (1/2N) sum_i ||W x_i + b - y_i||^2 + (lambda/2) ||W||_F^2
double loss(const SelectorModel& model, const TrainingSet& set);

struct Gradient {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};
Gradient gradient(const SelectorModel& model, const TrainingSet& set);

struct TrainResult {
  SelectorModel model;
  std::vector<double> loss_trajectory;  // loss before each epoch, then final
};

// Full-batch gradient descent from zero. Throws kDivergenceDetected when the
// loss becomes non-finite.
TrainResult train(const TrainingSet& set, std::vector<std::string> pipeline_ids,
                  const Hyperparameters& hp);

Json model_to_json(const SelectorModel& model);
SelectorModel model_from_json(const Json& j);
void save_model(const std::filesystem::path& path, const SelectorModel& model);
SelectorModel load_model(const std::filesystem::path& path);

struct Selection {
  Pipeline pipeline;
  std::map<std::string, double> scores;  // empty in manual mode
};

// Adjusts a pipeline's clipped score, e.g. with user feedback.
using ScoreAdjuster = std::function<double(const std::string& pipeline_id,
                                           double score)>;

// Manual mode: validates the selection against the registry.
Selection select_manual(const Registry& registry,
                        const PipelineSelection& selection);

// Automatic mode: scores every pipeline in the model, optionally adjusts the
// scores, filters by KG and returns the argmax (ties: smallest pipeline id).
// Throws kModelMissing, kInvalidModel (model pipelines not in the pool or
// feature size mismatch) and kNoPipelineMatchesConstraints.
Selection select_automatic(const Registry& registry, const SelectorModel* model,
                           std::string_view text,
                           const std::optional<std::string>& kg = std::nullopt,
                           const ScoreAdjuster& adjust = nullptr);

}  // namespace plumber

#endif  // PLUMBER_SELECTOR_H_
