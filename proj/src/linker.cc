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

#include <algorithm>

#include "plumber/native_components.h"

namespace plumber {

namespace {

struct Candidate {
  const KgRecord* record = nullptr;
  double similarity = 0.0;
  double score = 0.0;
};

struct IndexedForm {
  std::string normalized;
  TrigramBag trigrams;
};

std::vector<IndexedForm> FormsOf(const KgRecord& rec, TermRole role) {
  std::vector<IndexedForm> forms;
  auto add = [&](const std::string& raw) {
    std::string n = normalize_surface(raw);
    if (role == TermRole::kPredicate) n = verb_normalize(n);
    if (n.empty()) return;
    TrigramBag bag = char_trigrams(n);
    forms.push_back({std::move(n), std::move(bag)});
  };
  add(rec.label);
  for (const auto& a : rec.aliases) add(a);
  return forms;
}

bool Better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.record->iri < b.record->iri;
}

}  // namespace

std::string verb_normalize(std::string_view normalized) {
  std::string s(normalized);
  const auto space = s.find(' ');
  std::string head = s.substr(0, space);
  const std::string tail = space == std::string::npos ? "" : s.substr(space);
  const std::u32string decoded = decode_utf8(head);
  for (std::u32string_view suffix : {U"ing", U"ed", U"s"}) {
    if (decoded.size() >= suffix.size() + 3 &&
        std::u32string_view(decoded).substr(decoded.size() - suffix.size()) ==
            suffix) {
      head = encode_utf8(
          std::u32string_view(decoded).substr(0, decoded.size() - suffix.size()));
      break;
    }
  }
  return head + tail;
}

std::vector<LinkedTerm> link_terms(const std::vector<Mention>& mentions,
                                   TermRole role, const KGSnapshot& snapshot,
                                   const LinkerOptions& options) {
  const auto& records =
      role == TermRole::kEntity ? snapshot.entities : snapshot.predicates;
  std::vector<std::vector<IndexedForm>> forms;
  forms.reserve(records.size());
  for (const auto& rec : records) forms.push_back(FormsOf(rec, role));

  std::vector<LinkedTerm> out;
  out.reserve(mentions.size());
  for (const Mention& m : mentions) {
    std::string query = normalize_surface(m.surface);
    if (role == TermRole::kPredicate) query = verb_normalize(query);
    const TrigramBag query_bag = char_trigrams(query);

    std::vector<Candidate> exact, fuzzy;
    for (std::size_t r = 0; r < records.size(); ++r) {
      bool is_exact = false;
      double best_sim = 0.0;
      for (const auto& f : forms[r]) {
        if (!query.empty() && f.normalized == query) {
          is_exact = true;
          break;
        }
        best_sim = std::max(best_sim, jaccard(query_bag, f.trigrams));
      }
      const double sim = is_exact ? 1.0 : best_sim;
      Candidate c{&records[r], sim,
                  options.similarity_weight * sim +
                      options.prior_weight * records[r].prior};
      if (is_exact) {
        exact.push_back(c);
      } else if (!query.empty() && sim >= options.threshold) {
        fuzzy.push_back(c);
      }
    }
    const auto& pool = exact.empty() ? fuzzy : exact;

    LinkedTerm term;
    term.mention = m;
    if (!pool.empty()) {
      const Candidate& best = *std::min_element(pool.begin(), pool.end(), Better);
      term.ref = KGRef{best.record->iri, snapshot.kg};
      term.confidence = std::clamp(best.score, 0.0, 1.0);
    }
    out.push_back(std::move(term));
  }
  return out;
}

}  // namespace plumber
