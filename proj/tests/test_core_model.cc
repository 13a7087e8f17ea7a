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
#include "srt/model.h"
#include "srt/text.h"
#include "test_util.h"

namespace srt {
namespace {

TEST(NormalizeText, Examples) {
  EXPECT_EQ(NormalizeText("The  Chakra, Balancing!"), "chakra balancing");
  EXPECT_EQ(NormalizeText(""), "");
  // "a5" is a single token, so the article rule does not remove it.
  EXPECT_EQ(NormalizeText("A5: $180"), "a5 180");
}

TEST(NormalizeText, ArticlesAreWholeTokens) {
  EXPECT_EQ(NormalizeText("An apple, the pear and a plum"), "apple pear and plum");
  EXPECT_EQ(NormalizeText("theory anthem"), "theory anthem");
  EXPECT_EQ(NormalizeText("THE"), "");
}

TEST(NormalizeText, UnicodeComposition) {
  // Decomposed e + combining acute composes to the same text as U+00E9.
  EXPECT_EQ(NormalizeText("Cafe\xCC\x81"), NormalizeText("Caf\xC3\xA9"));
  EXPECT_EQ(NormalizeText("CAF\xC3\x89"), "caf\xC3\xA9");
  // Non-breaking space and em space separate tokens.
  EXPECT_EQ(NormalizeText("x\xC2\xA0y\xE2\x80\x83z"), "x y z");
}

TEST(NormalizeText, IdempotentOnRandomText) {
  std::mt19937 rng(7);
  const std::vector<std::u32string> atoms = {
      U"a", U"An", U"the", U"THE", U" ", U"\t", U"\n", U".", U",", U"!", U"$", U"'",
      U"É", U"é", U"ß", U"İ", U"Σ", U"\u2014", U" ",
      U"x1", U"42", U"中", U"\U0001F600", U"́", U"ﬁ", U"K", U"Å"};
  for (int i = 0; i < 3000; ++i) {
    std::u32string s;
    const int n = static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) s += atoms[rng() % atoms.size()];
    const std::string once = NormalizeText(EncodeUtf8(s));
    ASSERT_EQ(NormalizeText(once), once) << "input #" << i;
    for (const std::string& token : Tokenize(once)) ASSERT_FALSE(token.empty());
  }
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(Tokenize("discount applies"), (std::vector<std::string>{"discount", "applies"}));
  EXPECT_TRUE(Tokenize("").empty());
  EXPECT_EQ(Tokenize("x x y"), (std::vector<std::string>{"x", "x", "y"}));
}

TEST(Dialogue, RejectsGapsAndBlankText) {
  EXPECT_THROW(Dialogue("d", {{1, Speaker::kUser, "a"}, {3, Speaker::kUser, "b"}}), Error);
  EXPECT_THROW(Dialogue("d", {{1, Speaker::kUser, "  \n"}}), Error);
  EXPECT_NO_THROW(Dialogue("d", {{1, Speaker::kUser, "a"}, {2, Speaker::kUser, "b"}}));
}

TEST(QueryContext, FromDialogue) {
  const Dialogue d = testing::MembershipDialogue();
  const QueryContext q = QueryContext::FromDialogue(d, 13);
  EXPECT_EQ(q.query, d.turn(13).text);
  ASSERT_EQ(q.history.size(), 12u);
  for (const Turn& t : q.history) EXPECT_LT(t.index, 13);
  EXPECT_THROW(QueryContext::FromDialogue(d, 1), Error);
  EXPECT_THROW(QueryContext::FromDialogue(d, 14), Error);
}

TEST(RecallSet, SetSemantics) {
  RecallSet s{3, 1, 3};
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.ToVector(), (std::vector<int>{1, 3}));
  EXPECT_EQ(s.IntersectionSize(RecallSet{3, 4}), 1u);
  EXPECT_EQ(s.UnionSize(RecallSet{3, 4}), 3u);
}

// Qk resolves iff k <= number of user turns, Ak iff k <= number of assistant
// turns, over random speaker sequences.
TEST(ResolveMarker, RoundMappingIsTotal) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    std::vector<Turn> history;
    int users = 0;
    int assistants = 0;
    for (int i = 1; i <= n; ++i) {
      const Speaker s = rng() % 2 ? Speaker::kUser : Speaker::kAssistant;
      (s == Speaker::kUser ? users : assistants)++;
      history.push_back({i, s, "t" + std::to_string(i)});
    }
    for (int k = 1; k <= n + 2; ++k) {
      const auto q = ResolveMarker({Marker::Kind::kQuestion, k}, history);
      const auto a = ResolveMarker({Marker::Kind::kAnswer, k}, history);
      ASSERT_EQ(q.has_value(), k <= users);
      ASSERT_EQ(a.has_value(), k <= assistants);
      if (q) ASSERT_EQ(history[*q - 1].speaker, Speaker::kUser);
      if (a) ASSERT_EQ(history[*a - 1].speaker, Speaker::kAssistant);
    }
  }
}

TEST(ResolveMarker, FlatTurnMarker) {
  const auto history = testing::AlternatingTurns({"a", "b", "c"});
  EXPECT_EQ(ResolveMarker({Marker::Kind::kTurn, 3}, history), 3);
  EXPECT_EQ(ResolveMarker({Marker::Kind::kTurn, 4}, history), std::nullopt);
  EXPECT_EQ(ResolveMarker({Marker::Kind::kAnswer, 1}, history), 2);
}

}  // namespace
}  // namespace srt
