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


// In-process HTTP server speaking the chat-completion and embedding wire
// shapes, so gateway code can be exercised without network access.

#ifndef SRT_STUB_SERVER_H_
#define SRT_STUB_SERVER_H_

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "srt/gateway.h"

namespace srt {

struct StubReply {
  int status = 200;
  std::string content;  // assistant content for 2xx, response body otherwise
  std::chrono::milliseconds delay{0};
};

using StubHandler = std::function<StubReply(const ChatRequest&)>;

// Deterministic responder. Annotation prompts get a RECALL/REASONING/ANSWER
// reply; requests carrying a system instruction get a <HIS> trace; anything
// else gets a bare answer. The cited turn is the history turn with the
// highest token overlap with the query and the answer is that turn's text.
StubReply DefaultStubHandler(const ChatRequest& request);

class StubChatServer {
 public:
  // Binds 127.0.0.1 on `port` (0 picks a free port) and starts serving on a
  // background thread. Throws kTransportError if binding fails.
  explicit StubChatServer(StubHandler handler = DefaultStubHandler, int port = 0);
  ~StubChatServer();

  StubChatServer(const StubChatServer&) = delete;
  StubChatServer& operator=(const StubChatServer&) = delete;

  int port() const { return port_; }
  // e.g. "http://127.0.0.1:41234/v1"
  std::string base_url() const;
  int requests_served() const { return served_.load(); }

  // Blocks until Stop() is called from another thread or the process exits.
  void Wait();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
  std::atomic<int> served_{0};
  std::thread thread_;
};

}  // namespace srt

#endif  // SRT_STUB_SERVER_H_
