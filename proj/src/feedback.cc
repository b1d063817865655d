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

#include "plumber/feedback.h"

#include <algorithm>

#include "plumber/error.h"

namespace plumber {

std::string_view verdict_name(Verdict v) {
  return v == Verdict::kAccept ? "accept" : "reject";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "accept") return Verdict::kAccept;
  if (s == "reject") return Verdict::kReject;
  return std::nullopt;
}

Json feedback_record_to_json(const FeedbackRecord& r) {
  return Json{{"run_id", r.run_id},
              {"triple_index", r.triple_index},
              {"verdict", verdict_name(r.verdict)},
              {"pipeline_id", r.pipeline_id},
              {"timestamp", r.timestamp}};
}

FeedbackRecord feedback_record_from_json(const Json& j) {
  auto bad = [](const std::string& why) {
    return Error(ErrorCode::kInvalidRequest, "feedback record: " + why);
  };
  if (!j.is_object()) throw bad("must be an object");
  FeedbackRecord r;
  if (!j.contains("run_id") || !j["run_id"].is_string()) {
    throw bad("needs a string 'run_id'");
  }
  r.run_id = j["run_id"].get<std::string>();
  if (!j.contains("triple_index") || !j["triple_index"].is_number_integer() ||
      j["triple_index"].get<std::int64_t>() < 0) {
    throw bad("needs a non-negative integer 'triple_index'");
  }
  r.triple_index = j["triple_index"].get<std::size_t>();
  if (!j.contains("verdict") || !j["verdict"].is_string()) {
    throw bad("needs a 'verdict'");
  }
  auto v = parse_verdict(j["verdict"].get<std::string>());
  if (!v) throw bad("verdict must be 'accept' or 'reject'");
  r.verdict = *v;
  if (j.contains("pipeline_id")) {
    if (!j["pipeline_id"].is_string()) throw bad("'pipeline_id' must be a string");
    r.pipeline_id = j["pipeline_id"].get<std::string>();
  }
  if (j.contains("timestamp")) {
    if (!j["timestamp"].is_number_integer()) {
      throw bad("'timestamp' must be an integer");
    }
    r.timestamp = j["timestamp"].get<std::int64_t>();
  }
  return r;
}

double blend(double score, const FeedbackStats& stats, double beta) {
  if (stats.accepts + stats.rejects == 0) return score;
  const double a = static_cast<double>(stats.accepts);
  const double r = static_cast<double>(stats.rejects);
  return (1.0 - beta) * score + beta * (a + 1.0) / (a + r + 2.0);
}

FeedbackStore::FeedbackStore(std::optional<std::filesystem::path> log_path)
    : log_path_(std::move(log_path)) {
  if (!log_path_) return;
  if (log_path_->has_parent_path()) {
    std::filesystem::create_directories(log_path_->parent_path());
  }
  if (std::filesystem::exists(*log_path_)) {
    std::ifstream in(*log_path_);
    std::string line;
    while (std::getline(in, line)) {
      try {
        Apply(latest_, stats_, feedback_record_from_json(Json::parse(line)));
      } catch (const std::exception&) {
        // Torn trailing write from a crash.
      }
    }
  }
  bool torn_tail = false;
  if (std::ifstream tail(*log_path_, std::ios::binary | std::ios::ate);
      tail && tail.tellg() > 0) {
    tail.seekg(-1, std::ios::end);
    torn_tail = tail.get() != '\n';
  }
  log_.open(*log_path_, std::ios::app);
  if (!log_) {
    throw Error(ErrorCode::kConfigInvalid,
                "cannot open feedback log " + log_path_->string(),
                log_path_->string());
  }
  // Keep the next record on its own line after a torn write.
  if (torn_tail) log_ << '\n' << std::flush;
}

void FeedbackStore::Apply(
    std::map<std::pair<std::string, std::size_t>, Current>& latest,
    std::map<std::string, FeedbackStats>& stats, const FeedbackRecord& r) {
  auto key = std::make_pair(r.run_id, r.triple_index);
  if (auto it = latest.find(key); it != latest.end()) {
    FeedbackStats& old = stats[it->second.pipeline_id];
    if (it->second.verdict == Verdict::kAccept) {
      --old.accepts;
    } else {
      --old.rejects;
    }
  }
  latest[key] = Current{r.verdict, r.pipeline_id};
  FeedbackStats& s = stats[r.pipeline_id];
  s.pipeline_id = r.pipeline_id;
  if (r.verdict == Verdict::kAccept) {
    ++s.accepts;
  } else {
    ++s.rejects;
  }
}

void FeedbackStore::record(const FeedbackRecord& record,
                           const RunTripleCount& runs) {
  auto count = runs(record.run_id);
  if (!count) {
    throw Error(ErrorCode::kUnknownRun, "unknown run '" + record.run_id + "'",
                record.run_id);
  }
  if (record.triple_index >= *count) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "triple index " + std::to_string(record.triple_index) +
                    " is out of range for run '" + record.run_id + "' with " +
                    std::to_string(*count) + " triples",
                std::to_string(record.triple_index));
  }
  std::lock_guard lock(mu_);
  if (log_.is_open()) {
    log_ << feedback_record_to_json(record).dump() << '\n';
    log_.flush();
    if (!log_) {
      throw Error(ErrorCode::kInternal, "cannot append to the feedback log");
    }
  }
  Apply(latest_, stats_, record);
}

FeedbackStats FeedbackStore::stats(const std::string& pipeline_id) const {
  std::lock_guard lock(mu_);
  auto it = stats_.find(pipeline_id);
  if (it == stats_.end()) return FeedbackStats{pipeline_id, 0, 0};
  return it->second;
}

std::map<std::string, FeedbackStats> FeedbackStore::all_stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::size_t FeedbackStore::size() const {
  std::lock_guard lock(mu_);
  return latest_.size();
}

std::map<std::string, FeedbackStats> FeedbackStore::replay(
    const std::filesystem::path& log_path) {
  std::map<std::pair<std::string, std::size_t>, Current> latest;
  std::map<std::string, FeedbackStats> stats;
  std::ifstream in(log_path);
  std::string line;
  while (std::getline(in, line)) {
    try {
      Apply(latest, stats, feedback_record_from_json(Json::parse(line)));
    } catch (const std::exception&) {
    }
  }
  return stats;
}

}  // namespace plumber
