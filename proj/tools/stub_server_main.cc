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


// Serves the deterministic stub chat-completion endpoint until interrupted.

#include <iostream>

#include "CLI11.hpp"
#include "srt/error.h"
#include "srt/stub_server.h"

int main(int argc, char** argv) {
  CLI::App app{"Offline chat-completion and embedding stub", "srt-stub-server"};
  int port = 0;
  app.add_option("--port", port, "Port on 127.0.0.1 (0 picks a free one)")
      ->check(CLI::Range(0, 65535));
  CLI11_PARSE(app, argc, argv);
  try {
    srt::StubChatServer server(srt::DefaultStubHandler, port);
    std::cout << "export SRT_API_BASE=" << server.base_url() << std::endl;
    server.Wait();
  } catch (const srt::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
