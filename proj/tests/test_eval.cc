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

#include <map>

#include "json.hpp"
#include "srt/error.h"
#include "srt/eval.h"
#include "test_util.h"

namespace srt {
namespace {

TEST(TokenF1, Examples) {
  EXPECT_EQ(TokenF1("blue large box", "blue box"), 0.8);
  EXPECT_EQ(TokenF1("The Blue box!", "blue box"), 1.0);
  EXPECT_EQ(TokenF1("", ""), 1.0);
  EXPECT_EQ(TokenF1("", "blue"), 0.0);
  EXPECT_EQ(TokenF1("red", "blue"), 0.0);
  // Multiset counting: a repeated token only matches as often as it occurs.
  EXPECT_NEAR(TokenF1("box box", "box"), 2.0 / 3.0, 1e-12);
}

TEST(TokenF1, SymmetricAndBounded) {
  const std::vector<std::string> texts = {"a red box", "red red box", "box", "",
                                          "the big blue box", "blue", "Box, red!"};
  for (const auto& a : texts) {
    for (const auto& b : texts) {
      const double f = TokenF1(a, b);
      EXPECT_EQ(f, TokenF1(b, a));
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
  }
}

TEST(ExactMatch, Examples) {
  EXPECT_EQ(ExactMatch("The Uptown branch.", "uptown branch"), 1);
  EXPECT_EQ(ExactMatch("uptown", "uptown branch"), 0);
}

TEST(IsBadCase, Boundary) {
  EXPECT_TRUE(IsBadCase(0.49, 0));
  EXPECT_FALSE(IsBadCase(0.5, 0));
  EXPECT_FALSE(IsBadCase(0.0, 1));
}

TEST(ClassifyError, TwelveCaseFixture) {
  const std::vector<Turn> history = testing::ClassifyHistory();
  std::map<std::string, int> counts;
  for (const auto& c : testing::ClassifyCases()) {
    const ErrorType type = ClassifyError(c.predicted, c.gold, false, history);
    EXPECT_EQ(ErrorTypeKey(type), c.expected)
        << "predicted " << c.predicted.size() << " gold " << c.gold.size();
    ++counts[std::string(ErrorTypeKey(type))];
  }
  EXPECT_EQ(counts, (std::map<std::string, int>{
                        {"failure_answer", 3}, {"missing", 3}, {"over", 3}, {"wrong", 3}}));
}

TEST(ClassifyError, CorrectAnswerIsNotABadCase) {
  try {
    ClassifyError({1}, {1}, true, testing::ClassifyHistory());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotABadCase);
  }
}

TEST(ClassifyError, SubstitutionThresholdControlsWrongRecall) {
  const std::vector<Turn> history = testing::ClassifyHistory();
  EXPECT_EQ(ClassifyError({2}, {1}, false, history, 0.99), ErrorType::kMissingRecall);
}

TEST(Bucketize, Examples) {
  EXPECT_EQ(Bucketize(8), 8);
  EXPECT_EQ(Bucketize(13), 12);
  EXPECT_EQ(Bucketize(35), 32);
  EXPECT_EQ(Bucketize(2), 8);
  EXPECT_EQ(Bucketize(32), 32);
  EXPECT_THROW(Bucketize(0), Error);
}

EvalRecord Record(int t, double f1, int exact, std::optional<ErrorType> error) {
  EvalRecord r;
  r.dialogue_id = "d";
  r.t = t;
  r.bucket = Bucketize(t);
  r.f1 = f1;
  r.exact = exact;
  r.latency_ms = 10.0;
  r.error = error;
  return r;
}

TEST(EmitReport, EmptyInput) {
  const auto j = nlohmann::json::parse(EmitReport({}));
  EXPECT_EQ(j["per_bucket"].size(), kTurnBuckets.size());
  EXPECT_EQ(j["overall"]["n"], 0);
  EXPECT_EQ(j["overall"]["f1"], 0.0);
  EXPECT_TRUE(j["error_distribution"].empty());
}

TEST(EmitReport, SingleMissingCase) {
  const std::vector<EvalRecord> records = {
      Record(13, 0.0, 0, ErrorType::kMissingRecall)};
  const auto j = nlohmann::json::parse(EmitReport(records));
  EXPECT_EQ(j["error_distribution"]["missing"], 100.0);
  EXPECT_EQ(j["error_distribution"]["over"], 0.0);
  EXPECT_EQ(j["overall"]["bad_cases"], 1);
  EXPECT_EQ(j["per_bucket"][1]["k"], 12);
  EXPECT_EQ(j["per_bucket"][1]["n"], 1);
  EXPECT_EQ(j["error_distribution_per_bucket"][1]["distribution"]["missing"], 100.0);
}

TEST(EmitReport, AggregatesAndPercentages) {
  std::vector<EvalRecord> records;
  const std::vector<Turn> history = testing::ClassifyHistory();
  int t = 8;
  for (const auto& c : testing::ClassifyCases()) {
    records.push_back(Record(t, 0.1, 0, ClassifyError(c.predicted, c.gold, false, history)));
    t += 2;
  }
  records.push_back(Record(9, 1.0, 1, std::nullopt));
  EvalRecord failed = Record(9, 0.0, 0, std::nullopt);
  failed.failure = "transport";
  records.push_back(failed);

  const std::string text = EmitReport(records);
  EXPECT_EQ(text, EmitReport(records));
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["overall"]["n"], 13);
  EXPECT_EQ(j["overall"]["failed_items"], 1);
  EXPECT_EQ(j["overall"]["bad_cases"], 12);
  EXPECT_NEAR(j["overall"]["f1_accuracy"].get<double>(), 1.0 / 13.0, 1e-12);
  double sum = 0;
  for (const auto& [key, value] : j["error_distribution"].items()) {
    EXPECT_NEAR(value.get<double>(), 25.0, 1e-12) << key;
    sum += value.get<double>();
  }
  EXPECT_NEAR(sum, 100.0, 0.01);
  for (const auto& bucket : j["error_distribution_per_bucket"]) {
    if (bucket["bad_cases"] == 0) continue;
    double bucket_sum = 0;
    for (const auto& [key, value] : bucket["distribution"].items()) bucket_sum += value.get<double>();
    EXPECT_NEAR(bucket_sum, 100.0, 0.01);
  }
}

TEST(ScoreItem, FillsFields) {
  const Dialogue d = testing::MembershipDialogue();
  const QueryContext q = QueryContext::FromDialogue(d, 13);
  const EvalRecord good = ScoreItem(q, "the discount applies", "The discount applies.", {1, 10, 12},
                                    {1, 10, 12}, 5.0);
  EXPECT_EQ(good.bucket, 12);
  EXPECT_EQ(good.exact, 1);
  EXPECT_FALSE(good.error.has_value());
  const EvalRecord bad = ScoreItem(q, "no idea", "the discount applies", {1}, {1, 10, 12}, -3.0);
  EXPECT_EQ(bad.latency_ms, 0.0);
  ASSERT_TRUE(bad.error.has_value());
  EXPECT_EQ(*bad.error, ErrorType::kMissingRecall);
}

}  // namespace
}  // namespace srt
