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

#include "http_util.h"

#include "httplib.h"

namespace srt::internal {

HttpResponse PostJson(std::string_view base_url, std::string_view path,
                      const std::string& body, std::string_view bearer_token,
                      std::chrono::milliseconds timeout) {
  HttpResponse out;
  const std::size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string_view::npos) {
    out.error = "endpoint URL lacks a scheme: " + std::string(base_url);
    return out;
  }
  const std::size_t path_begin = base_url.find('/', scheme_end + 3);
  const std::string origin(base_url.substr(0, path_begin));
  std::string prefix = path_begin == std::string_view::npos
                           ? std::string()
                           : std::string(base_url.substr(path_begin));
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  try {
    httplib::Client client(origin);
    if (!client.is_valid()) {
      out.error = "unsupported endpoint: " + origin;
      return out;
    }
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
        timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    httplib::Headers headers;
    if (!bearer_token.empty()) {
      headers.emplace("Authorization", "Bearer " + std::string(bearer_token));
    }
    auto result =
        client.Post(prefix + std::string(path), headers, body, "application/json");
    if (!result) {
      out.error = "request to " + origin + " failed: " +
                  httplib::to_string(result.error());
      return out;
    }
    out.status = result->status;
    out.body = std::move(result->body);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace srt::internal
