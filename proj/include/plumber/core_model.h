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

#ifndef PLUMBER_CORE_MODEL_H_
#define PLUMBER_CORE_MODEL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace plumber {

// All character offsets in the framework count Unicode scalar values, never
// bytes. Strings are stored as UTF-8.

inline constexpr std::size_t kDefaultMaxDocumentChars = 100'000;

enum class DocumentSource { kInline, kFile };

struct Document {
  std::string id;
  std::string text;
  DocumentSource source = DocumentSource::kInline;
};

// Throws kInvalidDocument for an empty id or malformed UTF-8 and
// kDocumentTooLarge when the text exceeds `max_chars` scalar values.
void validate_document(const Document& doc,
                       std::size_t max_chars = kDefaultMaxDocumentChars);

struct Span {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  std::size_t length() const { return end - start; }
  bool valid_for(std::size_t text_length) const {
    return start < end && end <= text_length;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Mention {
  std::string surface;
  Span span;
  friend bool operator==(const Mention&, const Mention&) = default;
};

struct TextTriple {
  Mention subject;
  Mention predicate;
  Mention object;
  friend bool operator==(const TextTriple&, const TextTriple&) = default;
};

struct KGRef {
  std::string iri;
  std::string kg;
  friend bool operator==(const KGRef&, const KGRef&) = default;
};

struct LinkedTerm {
  Mention mention;
  std::optional<KGRef> ref;
  double confidence = 0.0;  // 0 whenever ref is absent

  bool linked() const { return ref.has_value(); }
  friend bool operator==(const LinkedTerm&, const LinkedTerm&) = default;
};

struct AlignedTriple {
  LinkedTerm subject;
  LinkedTerm predicate;
  LinkedTerm object;

  bool fully_linked() const {
    return subject.linked() && predicate.linked() && object.linked();
  }
  friend bool operator==(const AlignedTriple&, const AlignedTriple&) = default;
};

// UTF-8 <-> scalar values. Decoding replaces malformed sequences with U+FFFD;
// use is_valid_utf8() first when malformed input must be rejected.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
bool is_valid_utf8(std::string_view text);
std::size_t scalar_length(std::string_view text);

// Substring by scalar-value span. Out-of-range spans are clamped.
std::string substring(std::string_view text, Span span);

// Lowercases, drops everything except letters, digits and whitespace,
// collapses whitespace runs to one space and trims.
std::string normalize_surface(std::string_view s);

// Multiset of padded character trigrams, keyed by the UTF-8 trigram.
using TrigramBag = std::map<std::string, int>;

TrigramBag char_trigrams(std::string_view normalized);

// Multiset Jaccard: sum of min counts over sum of max counts; 1 when both
// bags are empty.
double jaccard(const TrigramBag& a, const TrigramBag& b);

// True when `iri` starts with an RFC 3986 scheme followed by ':' and a
// non-empty remainder.
bool is_absolute_iri(std::string_view iri);

}  // namespace plumber

#endif  // PLUMBER_CORE_MODEL_H_
