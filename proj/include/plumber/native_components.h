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

#ifndef PLUMBER_NATIVE_COMPONENTS_H_
#define PLUMBER_NATIVE_COMPONENTS_H_

#include <string>
#include <string_view>
#include <vector>

#include "plumber/core_model.h"
#include "plumber/kg_snapshot.h"
#include "plumber/text.h"

namespace plumber {

// Deterministic rule-based baselines for each IE task. All functions are
// pure.

struct Substitution {
  Span pronoun_span;  // in the original text
  std::string antecedent;
  Span out_span;  // in the transformed text
  friend bool operator==(const Substitution&, const Substitution&) = default;
};

struct CorefOutput {
  std::string text;
  std::vector<Substitution> substitutions;  // ordered by pronoun_span.start
};

// Replaces third-person pronouns with the most recent entity mention seen in
// the same or the two preceding sentences. An entity mention is a maximal
// run of capitalized tokens; a run at sentence start must be two tokens long
// or not a stopword. Runs that directly follow a predicate preposition
// ("born in Ulm") are not antecedent candidates.
CorefOutput resolve_coreferences(std::string_view text, const Lexicon& lexicon);

// One triple per lexicon verb: subject is the nearest run of content tokens
// to the left of the verb, object the nearest run to the right of the
// predicate, both within the sentence. Stopwords and other verbs between the
// verb and a run are skipped; runs stop at stopwords, verbs and punctuation.
std::vector<TextTriple> extract_triples(std::string_view text,
                                        const Lexicon& lexicon);

enum class TermRole { kEntity, kPredicate };

struct LinkerOptions {
  double threshold = 0.5;  // trigram Jaccard cut-off for fuzzy candidates
  double similarity_weight = 0.7;
  double prior_weight = 0.3;
};

// Strips one of -ing, -ed, -s from the first word when the remaining stem
// keeps at least three characters. Expects normalized input.
std::string verb_normalize(std::string_view normalized);

std::vector<LinkedTerm> link_terms(const std::vector<Mention>& mentions,
                                   TermRole role, const KGSnapshot& snapshot,
                                   const LinkerOptions& options = {});

}  // namespace plumber

#endif  // PLUMBER_NATIVE_COMPONENTS_H_
