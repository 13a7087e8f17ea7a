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

#ifndef SRT_SRC_HTTP_UTIL_H_
#define SRT_SRC_HTTP_UTIL_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace srt::internal {

struct HttpResponse {
  int status = 0;  // 0 when no response was received
  std::string body;
  std::string error;  // transport-level failure description
};

// POSTs a JSON body to `base_url` + `path`. base_url may carry a path prefix
// ("https://host/v1"). Never throws for network failures.
HttpResponse PostJson(std::string_view base_url, std::string_view path,
                      const std::string& body, std::string_view bearer_token,
                      std::chrono::milliseconds timeout);

}  // namespace srt::internal

#endif  // SRT_SRC_HTTP_UTIL_H_
