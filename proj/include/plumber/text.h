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

#ifndef PLUMBER_TEXT_H_
#define PLUMBER_TEXT_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "plumber/core_model.h"

namespace plumber {

// A whitespace-delimited token with leading/trailing non-alphanumerics
// stripped. `span` covers the stripped core in scalar-value offsets.
struct Token {
  std::u32string text;
  std::string lower;  // UTF-8, simple-lowercased core
  Span span;
  std::size_t sentence = 0;
  bool sentence_initial = false;
  bool leading_punct = false;
  bool trailing_punct = false;
  bool capitalized = false;
};

struct TokenizedText {
  std::vector<Token> tokens;
  std::size_t sentence_count = 0;
};

// Sentences end at '.', '?' or '!' followed by whitespace or end of text.
TokenizedText tokenize(std::u32string_view text);

// Closed list of third-person pronouns, lowercase.
const std::set<std::string, std::less<>>& third_person_pronouns();
bool is_pronoun(std::string_view lower);

// Prepositions that attach to a predicate ("born in", "founded by").
const std::set<std::string, std::less<>>& predicate_prepositions();

// Word lists used by the rule-based components. Loaded from configuration
// files: one token per line, '#' starts a comment.
struct Lexicon {
  std::set<std::string, std::less<>> verbs;
  std::set<std::string, std::less<>> stopwords;

  bool is_verb(std::string_view lower) const { return verbs.contains(lower); }
  bool is_stopword(std::string_view lower) const {
    return stopwords.contains(lower);
  }

  static Lexicon load(const std::filesystem::path& verbs_file,
                      const std::filesystem::path& stopwords_file);
  // Loads verbs.txt and stopwords.txt from `dir`.
  static Lexicon load_dir(const std::filesystem::path& dir);
};

std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace plumber

#endif  // PLUMBER_TEXT_H_
