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

#include <gtest/gtest.h>

#include "plumber/core_model.h"
#include "plumber/error.h"

namespace plumber {
namespace {

TEST(NormalizeSurface, Examples) {
  EXPECT_EQ(normalize_surface(""), "");
  EXPECT_EQ(normalize_surface("Albert  Einstein!"), "albert einstein");
  EXPECT_EQ(normalize_surface("U.S.A."), "usa");
}

TEST(NormalizeSurface, UnicodeAndWhitespace) {
  EXPECT_EQ(normalize_surface("  Ärzte\tOHNE  Grenzen "), "ärzte ohne grenzen");
  EXPECT_EQ(normalize_surface("R2-D2"), "r2d2");
  EXPECT_EQ(normalize_surface("!!!"), "");
}

TEST(NormalizeSurface, Idempotent) {
  for (const char* s : {"Albert  Einstein!", "U.S.A.", " x  Y z ", "Ünïcødé"}) {
    auto once = normalize_surface(s);
    EXPECT_EQ(normalize_surface(once), once);
  }
}

TEST(CharTrigrams, Examples) {
  EXPECT_TRUE(char_trigrams("").empty());
  EXPECT_EQ(char_trigrams("ab"), (TrigramBag{{"#ab", 1}, {"ab#", 1}}));
  EXPECT_EQ(char_trigrams("cat"), (TrigramBag{{"#ca", 1}, {"cat", 1}, {"at#", 1}}));
}

TEST(CharTrigrams, CountsRepeats) {
  // "#aaaa#" -> #aa, aaa, aaa, aa#
  auto bag = char_trigrams("aaaa");
  EXPECT_EQ(bag["aaa"], 2);
  EXPECT_EQ(bag.size(), 3u);
}

TEST(Jaccard, Examples) {
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 1.0);
  TrigramBag a{{"x", 1}, {"y", 1}};
  EXPECT_DOUBLE_EQ(jaccard(a, a), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(a, TrigramBag{{"y", 1}, {"z", 1}}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(jaccard(a, {}), 0.0);
}

TEST(Jaccard, Multiset) {
  TrigramBag a{{"x", 2}};
  TrigramBag b{{"x", 1}};
  EXPECT_DOUBLE_EQ(jaccard(a, b), 0.5);
}

TEST(Utf8, RoundTripAndLength) {
  std::string s = "na\xC3\xAFve \xF0\x9F\x98\x80";  // naïve + emoji
  EXPECT_TRUE(is_valid_utf8(s));
  EXPECT_EQ(scalar_length(s), 7u);
  EXPECT_EQ(encode_utf8(decode_utf8(s)), s);
  EXPECT_EQ(substring(s, Span{2, 5}), "\xC3\xAFve");
  EXPECT_FALSE(is_valid_utf8("\xC3"));
  EXPECT_FALSE(is_valid_utf8("\xED\xA0\x80"));  // surrogate
}

TEST(ValidateDocument, Errors) {
  Document doc{"d1", "hello"};
  EXPECT_NO_THROW(validate_document(doc));
  try {
    validate_document(Document{"d1", "\xFF"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDocument);
  }
  try {
    validate_document(Document{"d1", std::string(11, 'a')}, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDocumentTooLarge);
  }
  // The limit counts scalar values, not bytes.
  EXPECT_NO_THROW(validate_document(Document{"d1", "\xC3\xA9\xC3\xA9"}, 2));
  EXPECT_THROW(validate_document(Document{"", "x"}), Error);
}

TEST(Iri, Absolute) {
  EXPECT_TRUE(is_absolute_iri("http://toykg/e/ulm"));
  EXPECT_TRUE(is_absolute_iri("urn:x:y"));
  EXPECT_FALSE(is_absolute_iri("/e/ulm"));
  EXPECT_FALSE(is_absolute_iri("ulm"));
  EXPECT_FALSE(is_absolute_iri(""));
}

TEST(Span, Validity) {
  EXPECT_TRUE((Span{0, 3}.valid_for(3)));
  EXPECT_FALSE((Span{2, 2}.valid_for(3)));
  EXPECT_FALSE((Span{1, 4}.valid_for(3)));
}

}  // namespace
}  // namespace plumber
