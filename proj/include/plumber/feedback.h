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

#ifndef PLUMBER_FEEDBACK_H_
#define PLUMBER_FEEDBACK_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plumber/json_codec.h"

namespace plumber {

enum class Verdict { kAccept, kReject };
std::string_view verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

struct FeedbackRecord {
  std::string run_id;
  std::size_t triple_index = 0;
  Verdict verdict = Verdict::kAccept;
  std::string pipeline_id;
  std::int64_t timestamp = 0;  // UTC seconds

  friend bool operator==(const FeedbackRecord&, const FeedbackRecord&) = default;
};

Json feedback_record_to_json(const FeedbackRecord& r);
FeedbackRecord feedback_record_from_json(const Json& j);

struct FeedbackStats {
  std::string pipeline_id;
  std::size_t accepts = 0;
  std::size_t rejects = 0;
  friend bool operator==(const FeedbackStats&, const FeedbackStats&) = default;
};

inline constexpr double kDefaultBlendWeight = 0.3;

// (1 - beta) * score + beta * (a + 1) / (a + r + 2); score unchanged without
// any verdicts.
double blend(double score, const FeedbackStats& stats,
             double beta = kDefaultBlendWeight);

// Returns the number of triples in a run, or nullopt for an unknown run.
using RunTripleCount =
    std::function<std::optional<std::size_t>(const std::string& run_id)>;

// Durable per-triple verdicts. Appends go to a JSON Lines log and are
// replayed at startup; a later verdict on the same (run, triple) replaces
// the earlier one.
class FeedbackStore {
 public:
  explicit FeedbackStore(std::optional<std::filesystem::path> log_path = std::nullopt);

  // Throws kUnknownRun or kIndexOutOfRange.
  void record(const FeedbackRecord& record, const RunTripleCount& runs);

  FeedbackStats stats(const std::string& pipeline_id) const;
  std::map<std::string, FeedbackStats> all_stats() const;
  std::size_t size() const;

  // Rebuilds statistics from a log file; a truncated trailing line (torn
  // write) is ignored.
  static std::map<std::string, FeedbackStats> replay(
      const std::filesystem::path& log_path);

 private:
  struct Current {
    Verdict verdict;
    std::string pipeline_id;
  };
  static void Apply(std::map<std::pair<std::string, std::size_t>, Current>& latest,
                    std::map<std::string, FeedbackStats>& stats,
                    const FeedbackRecord& r);

  std::optional<std::filesystem::path> log_path_;
  mutable std::mutex mu_;
  std::ofstream log_;
  std::map<std::pair<std::string, std::size_t>, Current> latest_;
  std::map<std::string, FeedbackStats> stats_;
};

}  // namespace plumber

#endif  // PLUMBER_FEEDBACK_H_
