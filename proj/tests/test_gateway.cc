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

#include <atomic>
#include <cstdlib>

#include "srt/embedding.h"
#include "srt/error.h"
#include "srt/gateway.h"
#include "srt/records.h"
#include "srt/stub_server.h"
#include "test_util.h"

namespace srt {
namespace {

HttpTransportOptions FastOptions(const StubChatServer& server, int attempts = 3) {
  HttpTransportOptions options;
  options.base_url = server.base_url();
  options.timeout = std::chrono::milliseconds(5000);
  options.backoff.initial = std::chrono::milliseconds(1);
  options.backoff.max = std::chrono::milliseconds(4);
  options.backoff.max_attempts = attempts;
  return options;
}

QueryContext Membership() {
  return QueryContext::FromDialogue(testing::MembershipDialogue(), 13);
}

TEST(SrtpWrap, Structure) {
  Dialogue d("d", {{1, Speaker::kUser, "hi"},
                   {2, Speaker::kUser, "still there?"},
                   {3, Speaker::kAssistant, "yes"},
                   {4, Speaker::kUser, "what now"}});
  const QueryContext q = QueryContext::FromDialogue(d, 4);
  const ChatRequest r = SrtpWrap(q, StrategyConfig{});
  ASSERT_EQ(r.messages.size(), 4u);
  EXPECT_EQ(r.messages[0].role, ChatRole::kSystem);
  EXPECT_NE(r.messages[0].content.find("<HIS>"), std::string::npos);
  EXPECT_NE(r.messages[0].content.find("Answer:"), std::string::npos);
  EXPECT_EQ(r.messages[1], (ChatMessage{ChatRole::kUser, "Turn 1: hi\nTurn 2: still there?"}));
  EXPECT_EQ(r.messages[2], (ChatMessage{ChatRole::kAssistant, "Turn 3: yes"}));
  EXPECT_EQ(r.messages[3], (ChatMessage{ChatRole::kUser, "what now"}));

  StrategyConfig plain;
  plain.mode = StrategyMode::kPlain;
  try {
    SrtpWrap(q, plain);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionViolated);
  }
  const ChatRequest p = BuildStrategyRequest(q, plain);
  ASSERT_EQ(p.messages.size(), 3u);
  EXPECT_EQ(p.messages[0], (ChatMessage{ChatRole::kUser, "hi\nstill there?"}));
}

TEST(ChatRequest, JsonRoundTrip) {
  const ChatRequest r = SrtpWrap(Membership(), StrategyConfig{});
  EXPECT_EQ(ChatRequestFromJson(ChatRequestToJson(r)), r);
  EXPECT_THROW(ChatRequestFromJson("{\"messages\": 3}"), Error);
  EXPECT_EQ(ParseChatResponse(R"({"choices":[{"message":{"content":"ok"}}]})"), "ok");
  EXPECT_THROW(ParseChatResponse("{}"), Error);
}

TEST(BackoffPolicy, DoublesAndCaps) {
  BackoffPolicy b;
  b.initial = std::chrono::milliseconds(100);
  b.max = std::chrono::milliseconds(500);
  EXPECT_EQ(b.Delay(0).count(), 100);
  EXPECT_EQ(b.Delay(1).count(), 200);
  EXPECT_EQ(b.Delay(2).count(), 400);
  EXPECT_EQ(b.Delay(3).count(), 500);
  EXPECT_EQ(b.Delay(40).count(), 500);
}

TEST(HttpChatTransport, RequiresEndpoint) {
  EXPECT_THROW(HttpChatTransport(HttpTransportOptions{}), Error);
}

TEST(HttpChatTransport, RetriesServerErrorsOnly) {
  StubChatServer failing([](const ChatRequest&) { return StubReply{503, "busy"}; });
  HttpChatTransport transport(FastOptions(failing, 3));
  try {
    transport.Complete(ChatRequest{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransportError);
    EXPECT_NE(std::string(e.what()).find("503"), std::string::npos);
  }
  EXPECT_EQ(failing.requests_served(), 3);

  StubChatServer rejecting([](const ChatRequest&) { return StubReply{400, "bad"}; });
  HttpChatTransport no_retry(FastOptions(rejecting, 3));
  EXPECT_THROW(no_retry.Complete(ChatRequest{}), Error);
  EXPECT_EQ(rejecting.requests_served(), 1);
}

TEST(HttpChatTransport, RecoversAfterTransientFailure) {
  std::atomic<int> calls{0};
  StubChatServer flaky([&](const ChatRequest&) {
    return ++calls < 3 ? StubReply{429, "slow down"} : StubReply{200, "done"};
  });
  HttpChatTransport transport(FastOptions(flaky, 3));
  EXPECT_EQ(transport.Complete(ChatRequest{}), "done");
}

TEST(HttpChatTransport, UnreachableHostIsTransportError) {
  HttpTransportOptions options;
  options.base_url = "http://127.0.0.1:1/v1";
  options.backoff.initial = std::chrono::milliseconds(1);
  options.backoff.max_attempts = 2;
  HttpChatTransport transport(options);
  try {
    transport.Complete(ChatRequest{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransportError);
  }
}

constexpr const char* kGoodAnnotation =
    "RECALL:\nTurn 12: 'Lena only offers that service at our Uptown branch.'\n"
    "REASONING: Lena works uptown.\nANSWER: Uptown";

TEST(AnnotateTurn, RetryContractFailFailSucceed) {
  std::atomic<int> calls{0};
  std::atomic<std::size_t> last_size{0};
  StubChatServer server([&](const ChatRequest& r) {
    last_size = r.messages.size();
    return ++calls < 3 ? StubReply{200, "I think it is turn twelve."}
                       : StubReply{200, kGoodAnnotation};
  });
  HttpChatTransport transport(FastOptions(server));
  const AnnotationTriplet triplet = AnnotateTurn(Membership(), transport, {.max_attempts = 3});
  EXPECT_EQ(triplet.gold_recall, RecallSet({12}));
  EXPECT_EQ(triplet.answer, "Uptown");
  EXPECT_EQ(calls.load(), 3);
  // Each repair round echoes the bad reply and states the violation.
  EXPECT_EQ(last_size.load(), 5u);
}

TEST(AnnotateTurn, GivesUpAtLimit) {
  StubChatServer server([](const ChatRequest&) { return StubReply{200, "garbage"}; });
  HttpChatTransport transport(FastOptions(server));
  try {
    AnnotateTurn(Membership(), transport, {.max_attempts = 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedAnnotation);
  }
  EXPECT_EQ(server.requests_served(), 2);
}

TEST(AnnotateTurn, RejectsTurnsOutsideHistory) {
  std::atomic<int> calls{0};
  StubChatServer server([&](const ChatRequest&) {
    return ++calls == 1 ? StubReply{200, "RECALL:\nTurn 40: 'x'\nREASONING: r\nANSWER: a"}
                        : StubReply{200, kGoodAnnotation};
  });
  HttpChatTransport transport(FastOptions(server));
  EXPECT_EQ(AnnotateTurn(Membership(), transport).gold_recall, RecallSet({12}));
  EXPECT_EQ(calls.load(), 2);
}

TEST(AnnotateTurn, DefaultStubProducesUsableAnnotation) {
  StubChatServer server;
  HttpChatTransport transport(FastOptions(server));
  const AnnotationTriplet triplet = AnnotateTurn(Membership(), transport);
  EXPECT_EQ(triplet.gold_recall.size(), 1u);
  EXPECT_TRUE(triplet.gold_recall.WithinHistory(Membership().history));
}

std::vector<EvalItem> FixtureItems() {
  std::vector<EvalItem> items;
  for (const std::string& line : testing::FixtureLines("eval_items.jsonl")) {
    items.push_back(DecodeEvalItem(line));
  }
  return items;
}

TEST(RunSrtpEval, OrderStableOverStub) {
  const std::vector<EvalItem> items = FixtureItems();
  ASSERT_EQ(items.size(), 20u);
  StubChatServer server;
  HttpChatTransport transport(FastOptions(server));
  SrtpRunOptions options;
  options.concurrency = 8;
  const std::vector<EvalRecord> records = RunSrtpEval(items, StrategyConfig{}, transport, options);
  ASSERT_EQ(records.size(), items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(records[i].dialogue_id, items[i].context.dialogue_id);
    EXPECT_EQ(records[i].t, items[i].context.t);
    EXPECT_EQ(records[i].bucket, Bucketize(items[i].context.t));
    EXPECT_GE(records[i].latency_ms, 0.0);
    EXPECT_FALSE(records[i].failure.has_value());
    EXPECT_FALSE(records[i].predicted_recall.empty());
  }
  options.concurrency = 1;
  const std::vector<EvalRecord> serial = RunSrtpEval(items, StrategyConfig{}, transport, options);
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(serial[i].f1, records[i].f1);
    EXPECT_EQ(serial[i].predicted_recall, records[i].predicted_recall);
  }
}

TEST(RunSrtpEval, RecordsPerItemFailures) {
  std::vector<EvalItem> items = FixtureItems();
  items.resize(5);
  items[2].context.query = "FAIL this one";
  StubChatServer server([](const ChatRequest& r) {
    if (r.messages.back().content.find("FAIL") != std::string::npos) {
      return StubReply{500, "boom"};
    }
    return DefaultStubHandler(r);
  });
  HttpChatTransport transport(FastOptions(server, 2));
  const std::vector<EvalRecord> records = RunSrtpEval(items, StrategyConfig{}, transport);
  ASSERT_EQ(records.size(), 5u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].failure.has_value(), i == 2);
    EXPECT_EQ(records[i].dialogue_id, items[i].context.dialogue_id);
  }
}

TEST(RemoteEmbedder, MatchesLocalEmbedderThroughStub) {
  StubChatServer server;
  RemoteEmbedderOptions options;
  options.base_url = server.base_url();
  options.dim = 64;
  const RemoteEmbedder remote(options);
  const NgramEmbedder local(64);
  const std::vector<double> a = remote.Embed("Deep tissue is $160");
  const std::vector<double> b = local.Embed("Deep tissue is $160");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(RemoteEmbedder, UnavailableEndpoint) {
  RemoteEmbedderOptions options;
  options.base_url = "http://127.0.0.1:1/v1";
  const RemoteEmbedder remote(options);
  try {
    remote.Embed("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRemoteUnavailable);
  }
}

TEST(TeacherPrompt, IsVersionedAndHasPlaceholdersFilled) {
  EXPECT_FALSE(TeacherPromptVersion().empty());
  const ChatRequest r = BuildAnnotationRequest(Membership(), {});
  ASSERT_EQ(r.messages.size(), 1u);
  const std::string& prompt = r.messages[0].content;
  EXPECT_EQ(prompt.find("{{"), std::string::npos);
  EXPECT_NE(prompt.find("Turn 12 (assistant): Lena only offers"), std::string::npos);
  EXPECT_NE(prompt.find("Does my tier discount apply"), std::string::npos);
}

}  // namespace
}  // namespace srt
