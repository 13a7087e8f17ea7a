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

// Client side of chat-completion services: request construction for the
// plain and self-recall prompting strategies, an HTTP transport with
// exponential backoff, teacher annotation with format-repair retries, and
// the bucketed strategy evaluation run.

#ifndef SRT_GATEWAY_H_
#define SRT_GATEWAY_H_

#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srt/eval.h"
#include "srt/model.h"
#include "srt/trace.h"

namespace srt {

enum class ChatRole { kSystem, kUser, kAssistant };

std::string_view ChatRoleName(ChatRole role);
ChatRole ParseChatRole(std::string_view name);

struct ChatMessage {
  ChatRole role = ChatRole::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

// Wire body: {"model", "messages": [{"role", "content"}], "temperature",
// "max_tokens"}.
std::string ChatRequestToJson(const ChatRequest& request);
ChatRequest ChatRequestFromJson(std::string_view body);  // kInvalidArgument

// Extracts choices[0].message.content; kTransportError if absent.
std::string ParseChatResponse(std::string_view body);

enum class StrategyMode { kPlain, kSrtP };

std::string_view StrategyModeName(StrategyMode mode);
StrategyMode ParseStrategyMode(std::string_view name);

// Default system instruction for the self-recall strategy.
std::string DefaultSrtpInstruction(std::string_view answer_delimiter = "Answer:");

struct StrategyConfig {
  StrategyMode mode = StrategyMode::kSrtP;
  std::string answer_delimiter = "Answer:";
  std::string instruction;  // empty selects DefaultSrtpInstruction
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
};

// System instruction, then the history as user/assistant messages (each turn
// labelled "Turn {index}: ", consecutive same-speaker turns merged), then the
// query as its own user message. kPreconditionViolated unless mode is srt-p.
ChatRequest SrtpWrap(const QueryContext& q, const StrategyConfig& cfg);

// History and query only, without instruction or labels.
ChatRequest PlainRequest(const QueryContext& q, const StrategyConfig& cfg);

ChatRequest BuildStrategyRequest(const QueryContext& q, const StrategyConfig& cfg);

// Sends a request and returns the assistant content. Implementations must be
// safe for concurrent calls and report failures as kTransportError.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string Complete(const ChatRequest& request) = 0;
};

struct BackoffPolicy {
  std::chrono::milliseconds initial{250};
  std::chrono::milliseconds max{8000};
  int max_attempts = 4;  // total attempts, including the first

  // Delay before retry number `retry` (0-based): initial * 2^retry, capped.
  std::chrono::milliseconds Delay(int retry) const;
};

struct HttpTransportOptions {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string api_key;
  std::chrono::milliseconds timeout{60000};
  BackoffPolicy backoff;

  // Reads SRT_API_BASE and SRT_API_KEY.
  static HttpTransportOptions FromEnvironment();
};

// POSTs to {base_url}/chat/completions with bearer auth. Connection failures,
// 429 and 5xx are retried with exponential backoff; any other non-2xx status
// fails immediately.
class HttpChatTransport final : public ChatTransport {
 public:
  explicit HttpChatTransport(HttpTransportOptions options);
  std::string Complete(const ChatRequest& request) override;

 private:
  HttpTransportOptions options_;
};

// Versioned teacher prompt shipped with the library.
std::string_view TeacherPromptVersion();
std::string_view TeacherPromptTemplate();

struct AnnotateOptions {
  int max_attempts = 3;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 2048;
  TraceGrammar grammar;
};

ChatRequest BuildAnnotationRequest(const QueryContext& q, const AnnotateOptions& options);

// Asks the teacher for (recall set, reasoning, answer). A response that fails
// to parse, or recalls a turn outside the history, is sent back with the
// violation and retried; after max_attempts the last kMalformedAnnotation is
// rethrown. Transport errors propagate.
AnnotationTriplet AnnotateTurn(const QueryContext& q, ChatTransport& transport,
                               const AnnotateOptions& options = {});

struct EvalItem {
  QueryContext context;
  std::string gold_answer;
  RecallSet gold_recall;
};

struct SrtpRunOptions {
  int concurrency = 4;
  double match_threshold = 0.3;
  EvalOptions eval;
};

// One record per item, in input order. Transport failures are recorded on the
// item (EvalRecord::failure) and the run continues.
std::vector<EvalRecord> RunSrtpEval(std::span<const EvalItem> items,
                                    const StrategyConfig& cfg,
                                    ChatTransport& transport,
                                    const SrtpRunOptions& options = {});

}  // namespace srt

#endif  // SRT_GATEWAY_H_
