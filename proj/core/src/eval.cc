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

#include "srt/eval.h"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "srt/align.h"
#include "srt/error.h"
#include "srt/text.h"

namespace srt {
namespace {

constexpr std::array<ErrorType, 4> kErrorTypes = {
    ErrorType::kMissingRecall, ErrorType::kOverRecall, ErrorType::kWrongRecall,
    ErrorType::kFailureAnswer};

struct Tally {
  int n = 0;
  double f1 = 0.0;
  double exact = 0.0;
  double latency_ms = 0.0;
  int bad = 0;
  std::array<int, 4> errors = {0, 0, 0, 0};

  void Add(const EvalRecord& r) {
    ++n;
    f1 += r.f1;
    exact += r.exact;
    latency_ms += r.latency_ms;
    if (r.error) {
      ++bad;
      ++errors[static_cast<std::size_t>(*r.error)];
    }
  }

  nlohmann::ordered_json Means() const {
    const double d = n > 0 ? static_cast<double>(n) : 1.0;
    nlohmann::ordered_json j;
    j["n"] = n;
    j["f1"] = f1 / d;
    j["exact"] = exact / d;
    j["latency_ms"] = latency_ms / d;
    return j;
  }

  nlohmann::ordered_json Distribution() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (bad == 0) return j;
    for (ErrorType type : kErrorTypes) {
      j[std::string(ErrorTypeKey(type))] =
          100.0 * errors[static_cast<std::size_t>(type)] / static_cast<double>(bad);
    }
    return j;
  }
};

}  // namespace

std::string_view ErrorTypeKey(ErrorType type) {
  switch (type) {
    case ErrorType::kMissingRecall: return "missing";
    case ErrorType::kOverRecall: return "over";
    case ErrorType::kWrongRecall: return "wrong";
    case ErrorType::kFailureAnswer: return "failure_answer";
  }
  return "unknown";
}

double TokenF1(std::string_view predicted, std::string_view gold) {
  const std::vector<std::string> p = NormalizedTokens(predicted);
  const std::vector<std::string> g = NormalizedTokens(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const std::string& token : g) ++counts[token];
  int shared = 0;
  for (const std::string& token : p) {
    auto it = counts.find(token);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  if (shared == 0) return 0.0;
  const double precision = static_cast<double>(shared) / static_cast<double>(p.size());
  const double recall = static_cast<double>(shared) / static_cast<double>(g.size());
  return 2.0 * precision * recall / (precision + recall);
}

int ExactMatch(std::string_view predicted, std::string_view gold) {
  return NormalizeText(predicted) == NormalizeText(gold) ? 1 : 0;
}

bool IsBadCase(double f1, int exact, const EvalOptions& options) {
  return exact == 0 && f1 < options.bad_case_f1;
}

ErrorType ClassifyError(const RecallSet& predicted, const RecallSet& gold,
                        bool answer_correct, std::span<const Turn> history,
                        double substitution_threshold) {
  if (answer_correct) {
    throw Error(ErrorCode::kNotABadCase, "the answer is correct");
  }
  std::vector<int> extra;
  std::vector<int> missing;
  for (int i : predicted.indices()) {
    if (!gold.Contains(i)) extra.push_back(i);
  }
  for (int i : gold.indices()) {
    if (!predicted.Contains(i)) missing.push_back(i);
  }
  for (int e : extra) {
    const Turn* extra_turn = FindTurn(history, e);
    if (extra_turn == nullptr) continue;
    for (int m : missing) {
      const Turn* missing_turn = FindTurn(history, m);
      if (missing_turn != nullptr &&
          OverlapScore(extra_turn->text, missing_turn->text) >= substitution_threshold) {
        return ErrorType::kWrongRecall;
      }
    }
  }
  if (missing.empty() && !extra.empty()) return ErrorType::kOverRecall;
  if (!missing.empty()) return ErrorType::kMissingRecall;
  return ErrorType::kFailureAnswer;
}

int Bucketize(int turn_count) {
  if (turn_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "turn count must be >= 1");
  }
  int bucket = kTurnBuckets.front();
  for (int b : kTurnBuckets) {
    if (b <= turn_count) bucket = b;
  }
  return bucket;
}

EvalRecord ScoreItem(const QueryContext& q, std::string_view predicted_answer,
                     std::string_view gold_answer, const RecallSet& predicted_recall,
                     const RecallSet& gold_recall, double latency_ms,
                     const EvalOptions& options) {
  EvalRecord r;
  r.dialogue_id = q.dialogue_id;
  r.t = q.t;
  r.bucket = Bucketize(q.t);
  r.f1 = TokenF1(predicted_answer, gold_answer);
  r.exact = ExactMatch(predicted_answer, gold_answer);
  r.latency_ms = std::max(0.0, latency_ms);
  r.predicted_recall = predicted_recall;
  r.gold_recall = gold_recall;
  if (IsBadCase(r.f1, r.exact, options)) {
    r.error = ClassifyError(predicted_recall, gold_recall, false, q.history,
                            options.substitution_threshold);
  }
  return r;
}

std::string EmitReport(std::span<const EvalRecord> records,
                       const EvalOptions& options) {
  Tally overall;
  std::map<int, Tally> by_bucket;
  int failed = 0;
  int f1_correct = 0;
  for (const EvalRecord& r : records) {
    if (r.failure) {
      ++failed;
      continue;
    }
    overall.Add(r);
    by_bucket[r.bucket].Add(r);
    if (r.f1 >= options.bad_case_f1) ++f1_correct;
  }

  nlohmann::ordered_json report;
  nlohmann::ordered_json per_bucket = nlohmann::ordered_json::array();
  nlohmann::ordered_json per_bucket_errors = nlohmann::ordered_json::array();
  for (int k : kTurnBuckets) {
    const Tally& tally = by_bucket[k];
    nlohmann::ordered_json row;
    row["k"] = k;
    const nlohmann::ordered_json means = tally.Means();
    for (const auto& [key, value] : means.items()) row[key] = value;
    per_bucket.push_back(row);

    nlohmann::ordered_json err;
    err["k"] = k;
    err["bad_cases"] = tally.bad;
    err["distribution"] = tally.Distribution();
    per_bucket_errors.push_back(err);
  }
  report["per_bucket"] = per_bucket;

  nlohmann::ordered_json summary = overall.Means();
  summary["f1_accuracy"] =
      overall.n > 0 ? static_cast<double>(f1_correct) / overall.n : 0.0;
  summary["bad_cases"] = overall.bad;
  summary["failed_items"] = failed;
  report["overall"] = summary;
  report["error_distribution"] = overall.Distribution();
  report["error_distribution_per_bucket"] = per_bucket_errors;
  return report.dump(2) + "\n";
}

}  // namespace srt
