// Copyright 2026 The SRT Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>

#include "srt/error.h"
#include "srt/trace.h"
#include "test_util.h"

namespace srt {
namespace {

TEST(ValidateFormat, Examples) {
  EXPECT_TRUE(ValidateFormat("think <HIS> Q1: hi </HIS> so Answer: yes").valid);

  const FormatVerdict unclosed = ValidateFormat("think <HIS> x Answer: y");
  EXPECT_FALSE(unclosed.valid);
  EXPECT_TRUE(unclosed.Has(ViolationCode::kUnclosedTag));

  const FormatVerdict nested = ValidateFormat("<HIS><HIS>a</HIS></HIS>");
  EXPECT_FALSE(nested.valid);
  EXPECT_TRUE(nested.Has(ViolationCode::kNestedTag));
}

TEST(ValidateFormat, OtherViolations) {
  EXPECT_TRUE(ValidateFormat("a </HIS> b").Has(ViolationCode::kUnopenedClose));
  EXPECT_TRUE(ValidateFormat("a <HIS>  \n </HIS> b").Has(ViolationCode::kEmptyCitation));
  EXPECT_TRUE(ValidateFormat("<HIS>Q1:</HIS> b").Has(ViolationCode::kEmptyCitation));
  EXPECT_TRUE(
      ValidateFormat("<HIS>x</HIS>\nAnswer: <HIS>y</HIS>").Has(ViolationCode::kTagInAnswer));
  EXPECT_TRUE(ValidateFormat("plain reasoning only").valid);
}

TEST(ValidateFormat, ViolationSpansPointAtTags) {
  const std::string raw = "ok </HIS> fine";
  const FormatVerdict v = ValidateFormat(raw);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(raw.substr(v.violations[0].span.begin,
                       v.violations[0].span.end - v.violations[0].span.begin),
            "</HIS>");
}

TEST(ParseTrace, WorkedExample) {
  const ReasoningTrace trace = ParseTrace(testing::kMembershipTrace);
  ASSERT_EQ(trace.citations.size(), 3u);
  EXPECT_EQ(trace.citations[0].marker, (Marker{Marker::Kind::kQuestion, 1}));
  EXPECT_EQ(trace.citations[1].marker, (Marker{Marker::Kind::kAnswer, 5}));
  EXPECT_EQ(trace.citations[2].marker, (Marker{Marker::Kind::kAnswer, 6}));
  EXPECT_EQ(trace.citations[1].quoted_text, "The Chakra Balancing service is $180.");
  EXPECT_EQ(trace.answer, "the discount applies");
  for (std::size_t i = 1; i < trace.citations.size(); ++i) {
    EXPECT_LT(trace.citations[i - 1].span.begin, trace.citations[i].span.begin);
  }
}

TEST(ParseTrace, NoTagsAndMarkerlessFallback) {
  const ReasoningTrace plain = ParseTrace("no tags here Answer: ok");
  EXPECT_TRUE(plain.citations.empty());
  EXPECT_EQ(plain.answer, "ok");

  const ReasoningTrace quote = ParseTrace("<HIS>just a quote</HIS> Answer: x");
  ASSERT_EQ(quote.citations.size(), 1u);
  EXPECT_FALSE(quote.citations[0].marker.has_value());
  EXPECT_EQ(quote.citations[0].quoted_text, "just a quote");
}

TEST(ParseTrace, AnswerlessTraceAndLineInitialDelimiter) {
  const ReasoningTrace none = ParseTrace("<HIS>Turn 2: x</HIS> thinking");
  EXPECT_FALSE(none.has_answer);
  EXPECT_EQ(none.answer, "");

  // A line-initial delimiter wins over a later inline mention.
  const ReasoningTrace t = ParseTrace("why\nAnswer: blue, as the Answer: label says");
  EXPECT_EQ(t.answer, "blue, as the Answer: label says");
}

TEST(ParseTrace, RejectsInvalidFormat) {
  try {
    ParseTrace("<HIS> x");
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionViolated);
  }
}

TEST(ParseTrace, QuotesAreStripped) {
  const ReasoningTrace t = ParseTrace("<HIS>Turn 2: 'order is #118'</HIS>\nAnswer: #118");
  ASSERT_EQ(t.citations.size(), 1u);
  EXPECT_EQ(t.citations[0].quoted_text, "order is #118");
  EXPECT_EQ(t.citations[0].marker, (Marker{Marker::Kind::kTurn, 2}));
}

TEST(ParseTraceLenient, IgnoresMalformedRegions) {
  const ReasoningTrace t =
      ParseTraceLenient("<HIS>Turn 1: kept</HIS> <HIS><HIS>x</HIS></HIS> <HIS>open\nAnswer: z");
  ASSERT_EQ(t.citations.size(), 1u);
  EXPECT_EQ(t.citations[0].quoted_text, "kept");
  EXPECT_EQ(t.answer, "z");
}

std::string RandomWord(std::mt19937& rng) {
  static const std::vector<std::string> words = {"alpha", "beta", "gamma", "price", "180",
                                                 "uptown", "Lena", "order", "#118", "yes"};
  return words[rng() % words.size()];
}

// Rendering a parsed trace and parsing it again recovers the citations and
// the answer.
TEST(ParseTrace, RenderRoundTrip) {
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    std::string raw;
    const int regions = static_cast<int>(rng() % 4);
    for (int r = 0; r < regions; ++r) {
      raw += RandomWord(rng) + " <HIS>";
      const int cites = 1 + static_cast<int>(rng() % 3);
      for (int c = 0; c < cites; ++c) {
        static const char* kinds[] = {"Q", "A", "Turn "};
        raw += std::string(kinds[rng() % 3]) + std::to_string(1 + rng() % 9) + ": " +
               RandomWord(rng) + " " + RandomWord(rng) + " ";
      }
      raw += "</HIS> ";
    }
    raw += RandomWord(rng);
    if (rng() % 2) raw += "\nAnswer: " + RandomWord(rng);

    const ReasoningTrace first = ParseTrace(raw);
    const ReasoningTrace second = ParseTrace(RenderTrace(first));
    ASSERT_EQ(first.citations.size(), second.citations.size()) << raw;
    for (std::size_t c = 0; c < first.citations.size(); ++c) {
      ASSERT_EQ(first.citations[c].marker, second.citations[c].marker);
      ASSERT_EQ(first.citations[c].quoted_text, second.citations[c].quoted_text);
    }
    ASSERT_EQ(first.answer, second.answer);
    ASSERT_EQ(first.has_answer, second.has_answer);
  }
}

// Arbitrary byte soup built from tag fragments never throws, and the verdict
// is valid exactly when no violation is reported.
TEST(ValidateFormat, TotalOnTagSoup) {
  std::mt19937 rng(5);
  const std::vector<std::string> pieces = {"<HIS>", "</HIS>", "<HIS", "HIS>", "</", "<",
                                           ">", "Answer:", "\n", " ", "Q1:", "A2:",
                                           "Turn 3:", "x", "\xff", "\xc3", std::string(1, '\0')};
  for (int i = 0; i < 20000; ++i) {
    std::string raw;
    const int n = static_cast<int>(rng() % 16);
    for (int k = 0; k < n; ++k) raw += pieces[rng() % pieces.size()];
    FormatVerdict v;
    ASSERT_NO_THROW(v = ValidateFormat(raw));
    ASSERT_EQ(v.valid, v.violations.empty());
    ASSERT_NO_THROW(ParseTraceLenient(raw));
    if (v.valid) ASSERT_NO_THROW(ParseTrace(raw));
  }
}

TEST(ParseTeacherAnnotation, Examples) {
  const AnnotationTriplet a = ParseTeacherAnnotation(
      "RECALL:\nTurn 2: 'order is #118'\nREASONING:\n<HIS>Turn 2: 'order is #118'</HIS> so "
      "...\nANSWER:\n#118");
  EXPECT_EQ(a.gold_recall, (RecallSet{2}));
  EXPECT_EQ(a.answer, "#118");
  ASSERT_EQ(a.recall_lines.size(), 1u);
  EXPECT_EQ(a.recall_lines[0].second, "order is #118");

  const AnnotationTriplet b = ParseTeacherAnnotation(
      "RECALL:\nTurn 3: 'x'\nTurn 9: \"y\"\nREASONING:\nfine\nANSWER:\nz");
  EXPECT_EQ(b.gold_recall, (RecallSet{3, 9}));
}

TEST(ParseTeacherAnnotation, Malformed) {
  auto expect_malformed = [](const std::string& raw) {
    try {
      ParseTeacherAnnotation(raw);
      ADD_FAILURE() << "accepted: " << raw;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedAnnotation) << raw;
    }
  };
  expect_malformed("RECALL:\nTurn 2: 'x'\nREASONING:\nwhy");
  expect_malformed("RECALL:\nturn two: x\nREASONING:\nwhy\nANSWER:\ny");
  expect_malformed("REASONING:\nwhy\nRECALL:\nTurn 1: 'x'\nANSWER:\ny");
  expect_malformed("RECALL:\nTurn 1: 'x'\nREASONING:\n<HIS>open\nANSWER:\ny");
  expect_malformed("garbage");
}

TEST(ParseTeacherAnnotation, ExplicitNone) {
  const AnnotationTriplet a =
      ParseTeacherAnnotation("RECALL:\nnone\nREASONING:\nNothing needed.\nANSWER:\nhello");
  EXPECT_TRUE(a.gold_recall.empty());
  EXPECT_EQ(a.answer, "hello");
}

}  // namespace
}  // namespace srt
