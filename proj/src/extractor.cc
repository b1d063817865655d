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

struct Range {
  std::size_t first;
  std::size_t last;  // inclusive
};

Mention MakeMention(const std::u32string& source,
                    const std::vector<Token>& tokens, Range r) {
  Span span{tokens[r.first].span.start, tokens[r.last].span.end};
  return Mention{encode_utf8(source.substr(span.start, span.length())), span};
}

}  // namespace

std::vector<TextTriple> extract_triples(std::string_view text,
                                        const Lexicon& lexicon) {
  const std::u32string source = decode_utf8(text);
  const auto tokens = tokenize(source).tokens;

  auto is_content = [&](const Token& t) {
    return !lexicon.is_stopword(t.lower) && !lexicon.is_verb(t.lower);
  };

  std::vector<TextTriple> triples;
  for (std::size_t v = 0; v < tokens.size(); ++v) {
    const Token& verb = tokens[v];
    if (!lexicon.is_verb(verb.lower)) continue;
    const std::size_t sentence = verb.sentence;
    auto same_sentence = [&](std::size_t k) {
      return k < tokens.size() && tokens[k].sentence == sentence;
    };

    std::size_t pred_last = v;
    if (!verb.trailing_punct && same_sentence(v + 1) &&
        !tokens[v + 1].leading_punct &&
        predicate_prepositions().contains(tokens[v + 1].lower)) {
      pred_last = v + 1;
    }

    // Subject: walk left over stopwords and auxiliary verbs, then take the
    // run of content tokens. A token with trailing punctuation closes a run.
    std::optional<Range> subject;
    {
      std::ptrdiff_t k = static_cast<std::ptrdiff_t>(v) - 1;
      while (k >= 0 && same_sentence(k) && !is_content(tokens[k]) &&
             !tokens[k].trailing_punct) {
        --k;
      }
      if (k >= 0 && same_sentence(k) && is_content(tokens[k])) {
        std::size_t last = static_cast<std::size_t>(k);
        std::size_t first = last;
        while (first > 0 && same_sentence(first - 1) &&
               is_content(tokens[first - 1]) &&
               !tokens[first - 1].trailing_punct &&
               !tokens[first].leading_punct) {
          --first;
        }
        subject = Range{first, last};
      }
    }

    // Object: skip stopwords (but never another verb), then the content run.
    std::optional<Range> object;
    if (!tokens[pred_last].trailing_punct) {
      std::size_t k = pred_last + 1;
      while (same_sentence(k) && lexicon.is_stopword(tokens[k].lower) &&
             !lexicon.is_verb(tokens[k].lower) && !tokens[k].trailing_punct) {
        ++k;
      }
      if (same_sentence(k) && is_content(tokens[k])) {
        std::size_t first = k;
        std::size_t last = k;
        while (!tokens[last].trailing_punct && same_sentence(last + 1) &&
               is_content(tokens[last + 1]) && !tokens[last + 1].leading_punct) {
          ++last;
        }
        object = Range{first, last};
      }
    }

    if (!subject || !object) continue;
    triples.push_back(TextTriple{MakeMention(source, tokens, *subject),
                                 MakeMention(source, tokens, Range{v, pred_last}),
                                 MakeMention(source, tokens, *object)});
  }
  return triples;
}

}  // namespace plumber
