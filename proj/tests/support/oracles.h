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

#ifndef PLUMBER_TESTS_SUPPORT_ORACLES_H_
#define PLUMBER_TESTS_SUPPORT_ORACLES_H_

// Independent reference computations used by unit tests and the acceptance
// binary. None of these call into the code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "plumber/registry.h"
#include "plumber/selector.h"
#include "plumber/wire.h"
#include "support/test_support.h"

namespace plumber::testing {

// c, t <= 4 components, up to 3 KGs with e, r, j <= 3 linkers each. About
// one linker in five also supports a second KG.
inline std::vector<ComponentDescriptor> random_registry(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  std::vector<ComponentDescriptor> out;
  const int c = pick(1, 4), t = pick(1, 4), k = pick(1, 3);
  for (int i = 0; i < c; ++i) {
    out.push_back(native("coref-" + std::to_string(i), TaskKind::kCoref, "rule_coref"));
  }
  for (int i = 0; i < t; ++i) {
    out.push_back(native("ext-" + std::to_string(i), TaskKind::kTripleExtraction,
                         "rule_extractor"));
  }
  std::vector<std::string> kgs;
  for (int i = 0; i < k; ++i) kgs.push_back("kg" + std::to_string(i));
  const struct {
    TaskKind task;
    const char* prefix;
  } kinds[] = {{TaskKind::kEntityLinking, "el"},
               {TaskKind::kRelationLinking, "rl"},
               {TaskKind::kJointLinking, "jl"}};
  for (int g = 0; g < k; ++g) {
    for (const auto& kind : kinds) {
      const int n = pick(0, 3);
      for (int i = 0; i < n; ++i) {
        std::set<std::string> tags{kgs[static_cast<std::size_t>(g)]};
        if (k > 1 && pick(0, 4) == 0) {
          tags.insert(kgs[static_cast<std::size_t>(pick(0, k - 1))]);
        }
        out.push_back(native(std::string(kind.prefix) + "-" + std::to_string(g) +
                                 "-" + std::to_string(i),
                             kind.task, "snapshot_joint_linker", tags));
      }
    }
  }
  return out;
}

// Every (coref, extractor, linking, kg) combination tried by nested loops and
// kept when each slot has the right task and supports the KG.
inline std::set<std::string> brute_force_pipeline_ids(
    const std::vector<ComponentDescriptor>& all) {
  std::set<std::string> kgs;
  for (const auto& d : all) kgs.insert(d.kgs.begin(), d.kgs.end());
  std::set<std::string> ids;
  for (const auto& c : all) {
    if (c.task != TaskKind::kCoref) continue;
    for (const auto& t : all) {
      if (t.task != TaskKind::kTripleExtraction) continue;
      for (const auto& kg : kgs) {
        for (const auto& a : all) {
          if (!a.kgs.contains(kg)) continue;
          if (a.task == TaskKind::kJointLinking) {
            ids.insert(c.id + "+" + t.id + "+" + a.id + "@" + kg);
          }
          if (a.task != TaskKind::kEntityLinking) continue;
          for (const auto& b : all) {
            if (b.task == TaskKind::kRelationLinking && b.kgs.contains(kg)) {
              ids.insert(c.id + "+" + t.id + "+" + a.id + "+" + b.id + "@" + kg);
            }
          }
        }
      }
    }
  }
  return ids;
}

// c * t * sum_k (e_k * r_k + j_k), counted straight from descriptors.
inline std::size_t pool_formula(const std::vector<ComponentDescriptor>& all) {
  std::size_t c = 0, t = 0;
  std::set<std::string> kgs;
  for (const auto& d : all) {
    c += d.task == TaskKind::kCoref;
    t += d.task == TaskKind::kTripleExtraction;
    kgs.insert(d.kgs.begin(), d.kgs.end());
  }
  std::size_t sum = 0;
  for (const auto& kg : kgs) {
    std::size_t e = 0, r = 0, j = 0;
    for (const auto& d : all) {
      if (!d.kgs.contains(kg)) continue;
      e += d.task == TaskKind::kEntityLinking;
      r += d.task == TaskKind::kRelationLinking;
      j += d.task == TaskKind::kJointLinking;
    }
    sum += e * r + j;
  }
  return c * t * sum;
}

// Loss written out as explicit loops, for finite differences.
inline double loop_loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                        double lambda, const Eigen::MatrixXd& x,
                        const Eigen::MatrixXd& y) {
  const auto n = x.rows(), p = w.rows(), d = w.cols();
  double sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < p; ++k) {
      double pred = b(k);
      for (Eigen::Index f = 0; f < d; ++f) pred += w(k, f) * x(i, f);
      const double r = pred - y(i, k);
      sq += r * r;
    }
  }
  double reg = 0.0;
  for (Eigen::Index k = 0; k < p; ++k) {
    for (Eigen::Index f = 0; f < d; ++f) reg += w(k, f) * w(k, f);
  }
  return sq / (2.0 * static_cast<double>(n)) + 0.5 * lambda * reg;
}

struct FdGradient {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

// Central differences of loop_loss.
inline FdGradient finite_difference_gradient(const Eigen::MatrixXd& w,
                                             const Eigen::VectorXd& b,
                                             double lambda,
                                             const Eigen::MatrixXd& x,
                                             const Eigen::MatrixXd& y,
                                             double eps) {
  FdGradient g{Eigen::MatrixXd::Zero(w.rows(), w.cols()),
               Eigen::VectorXd::Zero(b.size())};
  for (Eigen::Index k = 0; k < w.rows(); ++k) {
    for (Eigen::Index f = 0; f < w.cols(); ++f) {
      Eigen::MatrixXd plus = w, minus = w;
      plus(k, f) += eps;
      minus(k, f) -= eps;
      g.weights(k, f) = (loop_loss(plus, b, lambda, x, y) -
                         loop_loss(minus, b, lambda, x, y)) /
                        (2.0 * eps);
    }
    Eigen::VectorXd plus = b, minus = b;
    plus(k) += eps;
    minus(k) -= eps;
    g.bias(k) = (loop_loss(w, plus, lambda, x, y) - loop_loss(w, minus, lambda, x, y)) /
                (2.0 * eps);
  }
  return g;
}

// max |a - f| / max(|a|, |f|, 1e-8) over all entries.
inline double max_relative_error(const Eigen::MatrixXd& analytic,
                                 const Eigen::MatrixXd& numeric) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const double a = analytic.data()[i], f = numeric.data()[i];
    const double scale = std::max({std::abs(a), std::abs(f), 1e-8});
    worst = std::max(worst, std::abs(a - f) / scale);
  }
  return worst;
}

inline std::string random_word(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "a", "b", "k", "o", "ul", "Z", "\xC3\xA9", "\xE2\x82\xAC", "\xF0\x9F\x98\x80", "q"};
  std::string w = "w";
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  for (int i = 0; i < n; ++i) {
    w += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
  }
  return w;
}

inline std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> seps = {" ", "  ", ". ", ", ", "\n", "\t", "\"", "\\"};
  std::string text;
  const int n = std::uniform_int_distribution<int>(0, 12)(rng);
  for (int i = 0; i < n; ++i) {
    text += random_word(rng);
    text += seps[std::uniform_int_distribution<std::size_t>(0, seps.size() - 1)(rng)];
  }
  return text;
}

inline Mention random_mention(std::mt19937_64& rng) {
  const std::size_t start = std::uniform_int_distribution<std::size_t>(0, 500)(rng);
  const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
  return Mention{random_word(rng), Span{start, start + len}};
}

inline InvocationPayload random_payload(std::mt19937_64& rng) {
  static const TaskKind tasks[] = {TaskKind::kCoref, TaskKind::kTripleExtraction,
                                   TaskKind::kEntityLinking,
                                   TaskKind::kRelationLinking,
                                   TaskKind::kJointLinking};
  InvocationPayload p;
  p.task = tasks[std::uniform_int_distribution<int>(0, 4)(rng)];
  if (is_linking_task(p.task)) {
    p.kg = std::uniform_int_distribution<int>(0, 1)(rng) ? "toykg" : "kg_2";
    std::vector<TextTriple> triples;
    const int n = std::uniform_int_distribution<int>(0, 5)(rng);
    for (int i = 0; i < n; ++i) {
      triples.push_back({random_mention(rng), random_mention(rng), random_mention(rng)});
    }
    p.triples = std::move(triples);
  } else {
    p.text = random_text(rng);
  }
  return p;
}


struct ClusteredText {
  std::string text;
  int cluster = 0;  // 0 or 1
};

// Two clusters with disjoint vocabularies and different surface statistics:
// short pronoun-heavy narrative versus long capitalized, numeric reports.
inline std::vector<ClusteredText> separable_corpus(std::mt19937_64& rng,
                                                   int per_cluster) {
  static const std::vector<std::string> narrative = {
      "he", "she", "it", "went", "home", "said", "they", "smiled", "walked",
      "her", "him", "quietly", "later", "slept", "ran"};
  static const std::vector<std::string> report = {
      "Revenue", "Q3", "2019", "Acme", "Corp", "Berlin", "EBITDA", "42",
      "Index", "NASDAQ", "Growth", "1.5", "Fund", "Series", "IPO"};
  std::vector<ClusteredText> out;
  for (int c = 0; c < 2; ++c) {
    const auto& vocab = c == 0 ? narrative : report;
    for (int i = 0; i < per_cluster; ++i) {
      std::string text;
      const int sentences = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int s = 0; s < sentences; ++s) {
        const int words = c == 0 ? std::uniform_int_distribution<int>(3, 6)(rng)
                                 : std::uniform_int_distribution<int>(8, 14)(rng);
        for (int w = 0; w < words; ++w) {
          if (w > 0) text += c == 1 && w % 4 == 0 ? ", " : " ";
          text += vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
        }
        text += ". ";
      }
      out.push_back({text, c});
    }
  }
  return out;
}

}  // namespace plumber::testing

#endif  // PLUMBER_TESTS_SUPPORT_ORACLES_H_
