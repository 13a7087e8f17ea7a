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


// The `srt` command line: subcommand routing, flat key/value configuration
// and JSONL file plumbing around the core library.

#ifndef SRT_TOOLS_CLI_H_
#define SRT_TOOLS_CLI_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace srt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Every tunable of every subcommand. Files use one `key = value` per line
// with `#` comments; unknown keys and out-of-range values are rejected.
struct RunConfig {
  int min_turns = 8;
  int max_turns = 32;
  double threshold = 0.6;
  double lambda = 0.15;
  double w_sem = 0.6;
  double w_dist = 0.4;
  bool near_duplicates = false;
  double near_fraction = 0.1;
  double match_threshold = 0.3;
  double substitution_threshold = 0.3;
  double bad_case_f1 = 0.5;
  double eps_adv = 1e-8;
  double eps_clip = 0.2;
  double beta = 0.04;
  double weight_format = 1.0;
  double weight_recall = 1.0;
  double weight_answer = 1.0;
  std::string embedder = "ngram";  // ngram | remote
  int embed_dim = 256;
  std::string embed_model = "text-embedding";
  std::string answer_delimiter = "Answer:";
  int jobs = 1;
  int concurrency = 4;
  int retries = 3;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  int timeout_ms = 60000;
  int seed = 0;

  // Throws srt::Error(kInvalidArgument) for unknown keys or unparsable values.
  void Set(std::string_view key, std::string_view value);
  // Throws srt::Error(kInvalidArgument) when a value is out of range.
  void Validate() const;
  // One `key = value` line per field, in declaration order.
  std::string Dump() const;

  static const std::vector<std::string>& Keys();
};

// Parses a config document; `origin` prefixes error messages.
void ApplyConfigText(RunConfig& config, std::string_view text, std::string_view origin);

// Runs `srt <args...>` (args exclude the program name) and returns the exit
// code. Results meant for the terminal go to `out`; the resolved config,
// progress and diagnostics go to `err`.
int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srt::cli

#endif  // SRT_TOOLS_CLI_H_
