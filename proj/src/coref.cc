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

#include <optional>

#include "plumber/native_components.h"

namespace plumber {

namespace {

struct Antecedent {
  std::u32string surface;
  std::size_t sentence = 0;
};

constexpr std::size_t kMaxSentenceDistance = 2;

}  // namespace

CorefOutput resolve_coreferences(std::string_view text, const Lexicon& lexicon) {
  const std::u32string source = decode_utf8(text);
  const TokenizedText tokenized = tokenize(source);
  const auto& tokens = tokenized.tokens;

  struct Replacement {
    Span span;
    std::u32string antecedent;
  };
  std::vector<Replacement> replacements;
  std::optional<Antecedent> current;

  std::size_t i = 0;
  while (i < tokens.size()) {
    const Token& tok = tokens[i];
    if (is_pronoun(tok.lower)) {
      if (current && tok.sentence - current->sentence <= kMaxSentenceDistance) {
        replacements.push_back({tok.span, current->surface});
        current->sentence = tok.sentence;
      }
      ++i;
      continue;
    }
    if (!tok.capitalized) {
      ++i;
      continue;
    }

    std::size_t j = i;
    while (j + 1 < tokens.size() && tokens[j + 1].sentence == tok.sentence &&
           tokens[j + 1].capitalized && !tokens[j].trailing_punct &&
           !tokens[j + 1].leading_punct && !is_pronoun(tokens[j + 1].lower)) {
      ++j;
    }
    const std::size_t run_length = j - i + 1;
    bool qualifies = !tok.sentence_initial || run_length >= 2 ||
                     !lexicon.is_stopword(tok.lower);
    if (qualifies && i > 0) {
      const Token& prev = tokens[i - 1];
      if (prev.sentence == tok.sentence && !prev.trailing_punct &&
          predicate_prepositions().contains(prev.lower)) {
        qualifies = false;
      }
    }
    if (qualifies) {
      Span run{tok.span.start, tokens[j].span.end};
      current = Antecedent{source.substr(run.start, run.length()), tok.sentence};
    }
    i = j + 1;
  }

  CorefOutput out;
  std::u32string transformed;
  transformed.reserve(source.size());
  std::size_t cursor = 0;
  for (const auto& r : replacements) {
    transformed.append(source, cursor, r.span.start - cursor);
    Span out_span{transformed.size(), transformed.size() + r.antecedent.size()};
    transformed.append(r.antecedent);
    cursor = r.span.end;
    out.substitutions.push_back(
        Substitution{r.span, encode_utf8(r.antecedent), out_span});
  }
  transformed.append(source, cursor, std::u32string::npos);
  out.text = encode_utf8(transformed);
  return out;
}

}  // namespace plumber
