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

#include "srt/gateway.h"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "http_util.h"
#include "json.hpp"
#include "srt/align.h"
#include "srt/error.h"
#include "srt/parallel.h"

namespace srt {
namespace internal {
extern const std::string_view kTeacherPromptVersion;
extern const std::string_view kTeacherPrompt;
}  // namespace internal

namespace {

ChatRole RoleOf(Speaker speaker) {
  return speaker == Speaker::kUser ? ChatRole::kUser : ChatRole::kAssistant;
}

void ReplaceAll(std::string& text, std::string_view from, std::string_view to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

bool Retryable(int status) { return status == 0 || status == 429 || status >= 500; }

}  // namespace

std::string_view ChatRoleName(ChatRole role) {
  switch (role) {
    case ChatRole::kSystem: return "system";
    case ChatRole::kUser: return "user";
    case ChatRole::kAssistant: return "assistant";
  }
  return "user";
}

ChatRole ParseChatRole(std::string_view name) {
  if (name == "system") return ChatRole::kSystem;
  if (name == "user") return ChatRole::kUser;
  if (name == "assistant") return ChatRole::kAssistant;
  throw Error(ErrorCode::kInvalidArgument, "unknown chat role '" + std::string(name) + "'");
}

std::string ChatRequestToJson(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  body["messages"] = nlohmann::ordered_json::array();
  for (const ChatMessage& m : request.messages) {
    body["messages"].push_back(
        {{"role", std::string(ChatRoleName(m.role))}, {"content", m.content}});
  }
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  return body.dump();
}

ChatRequest ChatRequestFromJson(std::string_view body) {
  try {
    const auto j = nlohmann::json::parse(body);
    ChatRequest request;
    request.model = j.value("model", "");
    request.temperature = j.value("temperature", 0.0);
    request.max_tokens = j.value("max_tokens", 1024);
    for (const auto& m : j.at("messages")) {
      request.messages.push_back({ParseChatRole(m.at("role").get<std::string>()),
                                  m.at("content").get<std::string>()});
    }
    return request;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("unreadable chat request: ") + e.what());
  }
}

std::string ParseChatResponse(std::string_view body) {
  try {
    const auto j = nlohmann::json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransportError,
                std::string("unreadable chat response: ") + e.what());
  }
}

std::string_view StrategyModeName(StrategyMode mode) {
  return mode == StrategyMode::kPlain ? "plain" : "srt-p";
}

StrategyMode ParseStrategyMode(std::string_view name) {
  if (name == "plain") return StrategyMode::kPlain;
  if (name == "srt-p") return StrategyMode::kSrtP;
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

std::string DefaultSrtpInstruction(std::string_view answer_delimiter) {
  return "You are answering the latest user message in a multi-turn "
         "conversation. Earlier turns are labelled \"Turn N:\". Work in this "
         "order: analyze what the latest message needs; recall the earlier "
         "turns that hold that information; cite each of them by copying it "
         "verbatim inside <HIS></HIS> tags, prefixed with its label (for "
         "example <HIS>Turn 3: the original text</HIS>); reason over the "
         "cited turns; then write the final answer on its own line starting "
         "with \"" +
         std::string(answer_delimiter) +
         "\". Cite only turns you actually need and never place tags after "
         "the answer line.";
}

ChatRequest SrtpWrap(const QueryContext& q, const StrategyConfig& cfg) {
  if (cfg.mode != StrategyMode::kSrtP) {
    throw Error(ErrorCode::kPreconditionViolated,
                "SrtpWrap requires the srt-p strategy");
  }
  ChatRequest request;
  request.model = cfg.model;
  request.temperature = cfg.temperature;
  request.max_tokens = cfg.max_tokens;
  request.messages.push_back(
      {ChatRole::kSystem, cfg.instruction.empty()
                              ? DefaultSrtpInstruction(cfg.answer_delimiter)
                              : cfg.instruction});
  const std::size_t history_begin = request.messages.size();
  for (const Turn& turn : q.history) {
    const ChatRole role = RoleOf(turn.speaker);
    const std::string line = "Turn " + std::to_string(turn.index) + ": " + turn.text;
    if (request.messages.size() > history_begin && request.messages.back().role == role) {
      request.messages.back().content += "\n" + line;
    } else {
      request.messages.push_back({role, line});
    }
  }
  request.messages.push_back({ChatRole::kUser, q.query});
  return request;
}

ChatRequest PlainRequest(const QueryContext& q, const StrategyConfig& cfg) {
  ChatRequest request;
  request.model = cfg.model;
  request.temperature = cfg.temperature;
  request.max_tokens = cfg.max_tokens;
  for (const Turn& turn : q.history) {
    const ChatRole role = RoleOf(turn.speaker);
    if (!request.messages.empty() && request.messages.back().role == role) {
      request.messages.back().content += "\n" + turn.text;
    } else {
      request.messages.push_back({role, turn.text});
    }
  }
  request.messages.push_back({ChatRole::kUser, q.query});
  return request;
}

ChatRequest BuildStrategyRequest(const QueryContext& q, const StrategyConfig& cfg) {
  return cfg.mode == StrategyMode::kSrtP ? SrtpWrap(q, cfg) : PlainRequest(q, cfg);
}

std::chrono::milliseconds BackoffPolicy::Delay(int retry) const {
  std::chrono::milliseconds delay = initial;
  for (int i = 0; i < retry && delay < max; ++i) delay *= 2;
  return std::min(delay, max);
}

HttpTransportOptions HttpTransportOptions::FromEnvironment() {
  HttpTransportOptions options;
  if (const char* base = std::getenv("SRT_API_BASE")) options.base_url = base;
  if (const char* key = std::getenv("SRT_API_KEY")) options.api_key = key;
  return options;
}

HttpChatTransport::HttpChatTransport(HttpTransportOptions options)
    : options_(std::move(options)) {
  if (options_.base_url.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no chat endpoint configured (set SRT_API_BASE)");
  }
  if (options_.backoff.max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  }
}

std::string HttpChatTransport::Complete(const ChatRequest& request) {
  const std::string body = ChatRequestToJson(request);
  std::string last_error;
  for (int attempt = 0; attempt < options_.backoff.max_attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.backoff.Delay(attempt - 1));
    const internal::HttpResponse response = internal::PostJson(
        options_.base_url, "/chat/completions", body, options_.api_key,
        options_.timeout);
    if (response.status >= 200 && response.status < 300) {
      return ParseChatResponse(response.body);
    }
    last_error = response.status == 0
                     ? response.error
                     : "HTTP " + std::to_string(response.status);
    if (!Retryable(response.status)) break;
  }
  throw Error(ErrorCode::kTransportError, last_error);
}

std::string_view TeacherPromptVersion() { return internal::kTeacherPromptVersion; }
std::string_view TeacherPromptTemplate() { return internal::kTeacherPrompt; }

ChatRequest BuildAnnotationRequest(const QueryContext& q, const AnnotateOptions& options) {
  std::string history;
  for (const Turn& turn : q.history) {
    std::string text = turn.text;
    std::replace(text.begin(), text.end(), '\n', ' ');
    history += "Turn " + std::to_string(turn.index) + " (" +
               std::string(SpeakerName(turn.speaker)) + "): " + text + "\n";
  }
  if (!history.empty()) history.pop_back();
  std::string query = q.query;
  std::replace(query.begin(), query.end(), '\n', ' ');

  std::string prompt(TeacherPromptTemplate());
  ReplaceAll(prompt, "{{T}}", std::to_string(q.t));
  ReplaceAll(prompt, "{{HISTORY}}", history);
  ReplaceAll(prompt, "{{QUERY}}", query);

  ChatRequest request;
  request.model = options.model;
  request.temperature = options.temperature;
  request.max_tokens = options.max_tokens;
  request.messages.push_back({ChatRole::kUser, std::move(prompt)});
  return request;
}

AnnotationTriplet AnnotateTurn(const QueryContext& q, ChatTransport& transport,
                               const AnnotateOptions& options) {
  if (options.max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  }
  ChatRequest request = BuildAnnotationRequest(q, options);
  std::string last_violation;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const std::string response = transport.Complete(request);
    try {
      AnnotationTriplet triplet = ParseTeacherAnnotation(response, options.grammar);
      for (int index : triplet.gold_recall.indices()) {
        if (FindTurn(q.history, index) == nullptr) {
          throw Error(ErrorCode::kMalformedAnnotation,
                      "recalled turn " + std::to_string(index) +
                          " is not part of the conversation before turn " +
                          std::to_string(q.t));
        }
      }
      return triplet;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMalformedAnnotation) throw;
      last_violation = e.what();
    }
    request.messages.push_back({ChatRole::kAssistant, response});
    request.messages.push_back(
        {ChatRole::kUser,
         "Your reply could not be used (" + last_violation +
             "). Reply again with exactly the RECALL:, REASONING: and ANSWER: "
             "sections."});
  }
  throw Error(ErrorCode::kMalformedAnnotation,
              "no usable annotation after " + std::to_string(options.max_attempts) +
                  " attempts; last problem: " + last_violation);
}

std::vector<EvalRecord> RunSrtpEval(std::span<const EvalItem> items,
                                    const StrategyConfig& cfg,
                                    ChatTransport& transport,
                                    const SrtpRunOptions& options) {
  TraceGrammar grammar;
  grammar.answer_delimiter = cfg.answer_delimiter;
  std::vector<EvalRecord> records(items.size());
  ParallelFor(items.size(), options.concurrency, [&](std::size_t i) {
    const EvalItem& item = items[i];
    const ChatRequest request = BuildStrategyRequest(item.context, cfg);
    std::string response;
    const auto start = std::chrono::steady_clock::now();
    try {
      response = transport.Complete(request);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransportError) throw;
      EvalRecord& r = records[i];
      r.dialogue_id = item.context.dialogue_id;
      r.t = item.context.t;
      r.bucket = Bucketize(item.context.t);
      r.gold_recall = item.gold_recall;
      r.failure = e.what();
      return;
    }
    const double latency_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();

    std::string answer = response;
    RecallSet predicted;
    if (cfg.mode == StrategyMode::kSrtP) {
      const ReasoningTrace trace = ParseTraceLenient(response, grammar);
      if (trace.has_answer) answer = trace.answer;
      predicted = PredictedRecallSet(trace, item.context.history,
                                     options.match_threshold)
                      .predicted;
    }
    records[i] = ScoreItem(item.context, answer, item.gold_answer, predicted,
                           item.gold_recall, latency_ms, options.eval);
  });
  return records;
}

}  // namespace srt
