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

#include "plumber/core_model.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>

#include "plumber/error.h"

namespace plumber {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT_OR_FFFD(bytes, i, length, c);
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      n = 0;
      U8_APPEND_UNSAFE(buf, n, 0xFFFD);
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

bool is_valid_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::size_t scalar_length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char b : text) {
    if ((b & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string substring(std::string_view text, Span span) {
  std::u32string decoded = decode_utf8(text);
  std::size_t start = std::min(span.start, decoded.size());
  std::size_t end = std::clamp(span.end, start, decoded.size());
  return encode_utf8(std::u32string_view(decoded).substr(start, end - start));
}

void validate_document(const Document& doc, std::size_t max_chars) {
  if (doc.id.empty()) {
    throw Error(ErrorCode::kInvalidDocument, "document id is empty", "id");
  }
  if (!is_valid_utf8(doc.text)) {
    throw Error(ErrorCode::kInvalidDocument, "document text is not valid UTF-8",
                doc.id);
  }
  if (scalar_length(doc.text) > max_chars) {
    throw Error(ErrorCode::kDocumentTooLarge,
                "document exceeds " + std::to_string(max_chars) + " characters",
                doc.id);
  }
}

std::string normalize_surface(std::string_view s) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t raw : decode_utf8(s)) {
    const auto c = static_cast<UChar32>(raw);
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (!u_isalpha(c) && !u_isdigit(c)) continue;
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(static_cast<char32_t>(u_tolower(c)));
  }
  return encode_utf8(out);
}

TrigramBag char_trigrams(std::string_view normalized) {
  TrigramBag bag;
  if (normalized.empty()) return bag;
  std::u32string padded = U"#" + decode_utf8(normalized) + U"#";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    ++bag[encode_utf8(std::u32string_view(padded).substr(i, 3))];
  }
  return bag;
}

double jaccard(const TrigramBag& a, const TrigramBag& b) {
  if (a.empty() && b.empty()) return 1.0;
  long long intersection = 0;
  long long union_size = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      union_size += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      union_size += ib->second;
      ++ib;
    } else {
      intersection += std::min(ia->second, ib->second);
      union_size += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return union_size == 0 ? 1.0
                         : static_cast<double>(intersection) /
                               static_cast<double>(union_size);
}

bool is_absolute_iri(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) {
    return false;
  }
  for (std::size_t i = 1; i < iri.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(iri[i]);
    if (c == ':') return i + 1 < iri.size();
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

}  // namespace plumber
