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

#include "plumber/text.h"

#include <unicode/uchar.h>

#include <fstream>

#include "plumber/error.h"

namespace plumber {

namespace {

bool IsAlnum(char32_t c) {
  return u_isalpha(static_cast<UChar32>(c)) ||
         u_isdigit(static_cast<UChar32>(c));
}

bool IsSpace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool IsTerminator(char32_t c) { return c == U'.' || c == U'?' || c == U'!'; }

std::string Lowercase(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    out.push_back(
        static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
  }
  return encode_utf8(out);
}

}  // namespace

TokenizedText tokenize(std::u32string_view text) {
  TokenizedText out;
  std::size_t sentence = 0;
  bool sentence_open = false;  // current sentence has at least one token
  bool at_sentence_start = true;

  std::size_t i = 0;
  while (i < text.size()) {
    if (IsSpace(text[i])) {
      ++i;
      continue;
    }
    std::size_t chunk_start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    std::size_t chunk_end = i;

    std::size_t core_start = chunk_start;
    std::size_t core_end = chunk_end;
    while (core_start < core_end && !IsAlnum(text[core_start])) ++core_start;
    while (core_end > core_start && !IsAlnum(text[core_end - 1])) --core_end;

    if (core_start < core_end) {
      Token token;
      token.text = std::u32string(text.substr(core_start, core_end - core_start));
      token.lower = Lowercase(token.text);
      token.span = Span{core_start, core_end};
      token.sentence = sentence;
      token.sentence_initial = at_sentence_start;
      token.leading_punct = core_start > chunk_start;
      token.trailing_punct = core_end < chunk_end;
      token.capitalized = u_isupper(static_cast<UChar32>(token.text.front()));
      out.tokens.push_back(std::move(token));
      sentence_open = true;
      at_sentence_start = false;
    }

    if (IsTerminator(text[chunk_end - 1]) && sentence_open) {
      ++sentence;
      sentence_open = false;
      at_sentence_start = true;
    }
  }
  out.sentence_count = sentence + (sentence_open ? 1 : 0);
  return out;
}

const std::set<std::string, std::less<>>& third_person_pronouns() {
  static const std::set<std::string, std::less<>> kPronouns = {
      "he",  "she",  "it",  "they", "him",   "her",
      "them", "his", "hers", "its", "their", "theirs"};
  return kPronouns;
}

bool is_pronoun(std::string_view lower) {
  return third_person_pronouns().contains(lower);
}

const std::set<std::string, std::less<>>& predicate_prepositions() {
  static const std::set<std::string, std::less<>> kPrepositions = {
      "in", "of", "by", "on", "at", "for", "with"};
  return kPrepositions;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid,
                "cannot open word list " + path.string(), path.string());
  }
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r\n");
    words.push_back(Lowercase(decode_utf8(line.substr(first, last - first + 1))));
  }
  return words;
}

Lexicon Lexicon::load(const std::filesystem::path& verbs_file,
                      const std::filesystem::path& stopwords_file) {
  Lexicon lexicon;
  for (auto& w : read_word_list(verbs_file)) lexicon.verbs.insert(std::move(w));
  for (auto& w : read_word_list(stopwords_file)) {
    lexicon.stopwords.insert(std::move(w));
  }
  return lexicon;
}

Lexicon Lexicon::load_dir(const std::filesystem::path& dir) {
  return load(dir / "verbs.txt", dir / "stopwords.txt");
}

}  // namespace plumber
