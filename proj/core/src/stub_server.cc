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


#include "srt/stub_server.h"

#include <regex>
#include <sstream>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "srt/align.h"
#include "srt/embedding.h"
#include "srt/error.h"

namespace srt {
namespace {

struct HistoryLine {
  int index = 0;
  std::string text;
};

// Collects "Turn n: text" and "Turn n (speaker): text" lines.
std::vector<HistoryLine> ScanHistory(const std::string& text) {
  static const std::regex kLine(R"(^Turn ([0-9]{1,9})(?: \((?:user|assistant)\))?: (.*)$)");
  std::vector<HistoryLine> lines;
  std::istringstream in(text);
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_match(line, m, kLine)) {
      lines.push_back({std::stoi(m[1].str()), m[2].str()});
    }
  }
  return lines;
}

const HistoryLine* BestMatch(const std::vector<HistoryLine>& history,
                             const std::string& query) {
  const HistoryLine* best = nullptr;
  double best_score = -1.0;
  for (const HistoryLine& line : history) {
    const double score = OverlapScore(query, line.text);
    if (score > best_score) {
      best = &line;
      best_score = score;
    }
  }
  return best;
}

}  // namespace

StubReply DefaultStubHandler(const ChatRequest& request) {
  if (request.messages.empty()) return {400, R"({"error":"no messages"})"};
  const std::string& first = request.messages.front().content;

  static const std::regex kQuery(R"(Current query \(turn [0-9]+\): (.*))");
  std::smatch m;
  // Annotation prompts, including repair rounds that append to them.
  if (request.messages.front().role == ChatRole::kUser &&
      std::regex_search(first, m, kQuery)) {
    const std::string query = m[1].str();
    const std::vector<HistoryLine> history = ScanHistory(first);
    const HistoryLine* best = BestMatch(history, query);
    if (best == nullptr) {
      return {200, "RECALL:\nnone\nREASONING:\nNo earlier turn is needed.\nANSWER:\n" + query};
    }
    const std::string cite = "Turn " + std::to_string(best->index) + ": '" + best->text + "'";
    return {200, "RECALL:\n" + cite + "\nREASONING:\n<HIS>" + cite +
                     "</HIS> The cited turn answers the query.\nANSWER:\n" + best->text};
  }

  const std::string& query = request.messages.back().content;
  std::string transcript;
  for (std::size_t i = 0; i + 1 < request.messages.size(); ++i) {
    transcript += request.messages[i].content + "\n";
  }
  const std::vector<HistoryLine> history = ScanHistory(transcript);
  const HistoryLine* best = BestMatch(history, query);
  const bool srtp = request.messages.front().role == ChatRole::kSystem;
  if (!srtp || best == nullptr) {
    return {200, best == nullptr ? query : best->text};
  }
  return {200, "The query depends on an earlier turn. <HIS>Turn " +
                   std::to_string(best->index) + ": " + best->text +
                   "</HIS> That turn holds the needed fact.\nAnswer: " + best->text};
}

struct StubChatServer::Impl {
  httplib::Server server;
};

StubChatServer::StubChatServer(StubHandler handler, int port)
    : impl_(std::make_unique<Impl>()) {
  httplib::Server& server = impl_->server;
  server.Post("/v1/chat/completions", [this, handler](const httplib::Request& req,
                                                      httplib::Response& res) {
    ++served_;
    StubReply reply;
    try {
      reply = handler(ChatRequestFromJson(req.body));
    } catch (const std::exception& e) {
      reply = {400, nlohmann::json({{"error", e.what()}}).dump()};
    }
    if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
    res.status = reply.status;
    if (reply.status >= 200 && reply.status < 300) {
      const nlohmann::json body = {
          {"object", "chat.completion"},
          {"choices",
           {{{"index", 0},
             {"message", {{"role", "assistant"}, {"content", reply.content}}},
             {"finish_reason", "stop"}}}}};
      res.set_content(body.dump(), "application/json");
    } else {
      res.set_content(reply.content, "application/json");
    }
  });
  server.Post("/v1/embeddings", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    ++served_;
    try {
      const auto body = nlohmann::json::parse(req.body);
      const NgramEmbedder embedder(body.value("dimensions", 256));
      const nlohmann::json out = {
          {"object", "list"},
          {"data",
           {{{"index", 0},
             {"embedding", embedder.Embed(body.at("input").get<std::string>())}}}}};
      res.set_content(out.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(nlohmann::json({{"error", e.what()}}).dump(), "application/json");
    }
  });

  port_ = port == 0 ? server.bind_to_any_port("127.0.0.1")
                    : (server.bind_to_port("127.0.0.1", port) ? port : -1);
  if (port_ <= 0) {
    throw Error(ErrorCode::kTransportError,
                "stub server could not bind 127.0.0.1:" + std::to_string(port));
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  server.wait_until_ready();
}

StubChatServer::~StubChatServer() {
  Stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubChatServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/v1";
}

void StubChatServer::Wait() {
  if (thread_.joinable()) thread_.join();
}

void StubChatServer::Stop() { impl_->server.stop(); }

}  // namespace srt
