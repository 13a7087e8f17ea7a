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

#include <algorithm>
#include <sstream>

#include "cli.h"
#include "json.hpp"
#include "srt/error.h"
#include "srt/records.h"
#include "test_util.h"

namespace srt {
namespace {

using testing::Fixture;
using testing::TempDir;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Srt(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, HelpOnEverySubcommand) {
  EXPECT_EQ(Srt({"--help"}).code, 0);
  for (const char* sub : {"curate", "annotate", "verify", "sft-build", "reward", "grpo-check",
                          "eval", "srtp"}) {
    const CliRun r = Srt({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("--config"), std::string::npos) << sub;
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(Srt({}).code, cli::kExitUsage);
  EXPECT_EQ(Srt({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(Srt({"grpo-check", "--group", Fixture("group.json"), "--bogus"}).code,
            cli::kExitUsage);
  EXPECT_EQ(Srt({"grpo-check"}).code, cli::kExitUsage);  // missing required option
  EXPECT_EQ(Srt({"sft-build", "--in", "a", "--dialogues", "b", "--mode", "half", "--out", "c"}).code,
            cli::kExitUsage);
  const CliRun bad_value = Srt({"curate", "--in", "a", "--out", "b", "--threshold", "high"});
  EXPECT_EQ(bad_value.code, cli::kExitUsage);
  EXPECT_NE(bad_value.err.find("threshold"), std::string::npos);
}

TEST(Cli, UnknownConfigKeyExitsTwo) {
  TempDir dir;
  testing::Spit(dir.File("c.conf"), "# tuning\nthreshold = 0.5\ncolour = blue\n");
  const CliRun r = Srt({"grpo-check", "--group", Fixture("group.json"), "--config", dir.File("c.conf")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  EXPECT_NE(r.err.find(":3"), std::string::npos);  // line number of the offending key
}

TEST(Cli, MissingInputExitsOneAndNamesPath) {
  TempDir dir;
  const std::string missing = dir.File("nope.jsonl");
  const CliRun r = Srt({"curate", "--in", missing, "--out", dir.File("out.jsonl")});
  EXPECT_EQ(r.code, cli::kExitDataError);
  EXPECT_NE(r.err.find(missing), std::string::npos);
  const CliRun c = Srt({"grpo-check", "--group", Fixture("group.json"), "--config", missing});
  EXPECT_EQ(c.code, cli::kExitDataError);
  EXPECT_NE(c.err.find(missing), std::string::npos);
}

TEST(Cli, MalformedRecordsExitOneButKeepGoing) {
  TempDir dir;
  const std::vector<std::string> lines = testing::FixtureLines("dialogues.jsonl");
  testing::Spit(dir.File("in.jsonl"), lines[0] + "\n{not json\n" + lines[1] + "\n");
  const CliRun r = Srt({"curate", "--in", dir.File("in.jsonl"), "--out", dir.File("out.jsonl")});
  EXPECT_EQ(r.code, cli::kExitDataError);
  EXPECT_NE(r.err.find(":2"), std::string::npos);
  EXPECT_FALSE(testing::Slurp(dir.File("out.jsonl")).empty());
}

TEST(Cli, ConfigPrecedenceFlagsOverFileOverDefaults) {
  TempDir dir;
  testing::Spit(dir.File("c.conf"), "threshold = 0.5\nlambda = 0.2\n");
  const CliRun r = Srt({"curate", "--in", Fixture("dialogues.jsonl"), "--out", dir.File("o.jsonl"),
                     "--config", dir.File("c.conf"), "--lambda", "0.3", "--quiet"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("threshold = 0.5\n"), std::string::npos);
  EXPECT_NE(r.err.find("lambda = 0.3\n"), std::string::npos);
  EXPECT_NE(r.err.find("w_sem = 0.6\n"), std::string::npos);
}

TEST(Cli, RunConfigSetValidateDump) {
  cli::RunConfig c;
  c.Set("bad_case_f1", "0.25");
  c.Set("near_duplicates", "true");
  EXPECT_EQ(c.bad_case_f1, 0.25);
  EXPECT_TRUE(c.near_duplicates);
  EXPECT_THROW(c.Set("nope", "1"), Error);
  EXPECT_THROW(c.Set("jobs", "2.5"), Error);
  c.jobs = 0;
  EXPECT_THROW(c.Validate(), Error);
  cli::RunConfig round;
  cli::ApplyConfigText(round, cli::RunConfig{}.Dump(), "dump");
  EXPECT_EQ(round.Dump(), cli::RunConfig{}.Dump());
  EXPECT_EQ(cli::RunConfig::Keys().size(), 29u);
}

TEST(Cli, GrpoCheckPrintsObjective) {
  const CliRun r = Srt({"grpo-check", "--group", Fixture("group.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["advantages"].size(), 3u);
  double sum = 0;
  for (const auto& a : j["advantages"]) sum += a.get<double>();
  EXPECT_NEAR(sum, 0.0, 1e-9);
  EXPECT_TRUE(j["objective"].is_number());
}

TEST(Cli, PipelineProducesExpectedCounts) {
  TempDir dir;
  ASSERT_EQ(Srt({"curate", "--in", Fixture("dialogues.jsonl"), "--out", dir.File("cur.jsonl"),
                 "--quiet"})
                .code,
            0);
  EXPECT_EQ(testing::FixtureLines("dialogues.jsonl").size(), 50u);
  const std::string cur = testing::Slurp(dir.File("cur.jsonl"));
  EXPECT_EQ(std::count(cur.begin(), cur.end(), '\n'), 39);

  const CliRun v = Srt({"verify", "--annotations", Fixture("annotations.jsonl"), "--dialogues",
                     Fixture("dialogues.jsonl"), "--out", dir.File("ver.jsonl"), "--rejects",
                     dir.File("rej.jsonl"), "--quiet"});
  ASSERT_EQ(v.code, 0) << v.err;
  const std::string rej = testing::Slurp(dir.File("rej.jsonl"));
  EXPECT_EQ(std::count(rej.begin(), rej.end(), '\n'), 8);
  EXPECT_NE(rej.find("CONSISTENCY"), std::string::npos);
  EXPECT_NE(rej.find("HALLUCINATION"), std::string::npos);

  const CliRun e = Srt({"eval", "--pred", Fixture("preds.jsonl"), "--gold", Fixture("annotations.jsonl"),
                     "--dialogues", Fixture("dialogues.jsonl"), "--report", dir.File("r.json"),
                     "--quiet"});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto report = nlohmann::json::parse(testing::Slurp(dir.File("r.json")));
  EXPECT_EQ(report["overall"]["n"], 44);
}

TEST(Records, RoundTrips) {
  for (const std::string& line : testing::FixtureLines("dialogues.jsonl")) {
    const DialogueRecord d = DecodeDialogue(line);
    EXPECT_EQ(DecodeDialogue(EncodeDialogue(d)).dialogue.turns(), d.dialogue.turns());
  }
  for (const std::string& line : testing::FixtureLines("annotations.jsonl")) {
    const AnnotationRecord a = DecodeAnnotation(line);
    const std::string encoded = EncodeAnnotation(a);
    EXPECT_EQ(EncodeAnnotation(DecodeAnnotation(encoded)), encoded);
  }
  for (const std::string& line : testing::FixtureLines("eval_items.jsonl")) {
    const std::string encoded = EncodeEvalItem(DecodeEvalItem(line));
    EXPECT_EQ(EncodeEvalItem(DecodeEvalItem(encoded)), encoded);
  }
  for (const std::string& line : testing::FixtureLines("traces.jsonl")) {
    const std::string encoded = EncodeTrace(DecodeTrace(line));
    EXPECT_EQ(EncodeTrace(DecodeTrace(encoded)), encoded);
  }
}

TEST(Records, MalformedRecordsNameTheField) {
  try {
    DecodeDialogue(R"({"id": "x", "turns": [{"index": 1, "speaker": "robot", "text": "hi"}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedRecord);
    EXPECT_NE(std::string(e.what()).find("speaker"), std::string::npos);
  }
  EXPECT_THROW(DecodePrediction(R"({"dialogue_id": "x", "t": 3})"), Error);
  EXPECT_THROW(DecodeGroupFile(R"({"members": [], "params": {"gamma": 1}})"), Error);
  EXPECT_THROW(DecodeGroupFile(R"({"members": [], "params": {"beta": -1}})"), Error);
}

}  // namespace
}  // namespace srt
