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

#ifndef SRT_EVAL_H_
#define SRT_EVAL_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "srt/model.h"

namespace srt {

enum class ErrorType { kMissingRecall, kOverRecall, kWrongRecall, kFailureAnswer };

// Report key: "missing", "over", "wrong", "failure_answer".
std::string_view ErrorTypeKey(ErrorType type);

inline constexpr std::array<int, 7> kTurnBuckets = {8, 12, 16, 20, 24, 28, 32};

struct EvalOptions {
  // An item is a bad case when exact match fails and F1 is below this.
  double bad_case_f1 = 0.5;
  // Minimum overlap for an extra recall to count as a substitute for a
  // missing one.
  double substitution_threshold = 0.3;
};

struct EvalRecord {
  std::string dialogue_id;
  int t = 0;
  int bucket = 8;
  double f1 = 0.0;
  int exact = 0;
  double latency_ms = 0.0;
  RecallSet predicted_recall;
  RecallSet gold_recall;
  std::optional<ErrorType> error;
  // Set when the item could not be scored (e.g. the transport failed); such
  // records are excluded from the metric aggregates.
  std::optional<std::string> failure;
};

// Multiset token F1 over normalized text. Both empty -> 1, one empty -> 0.
double TokenF1(std::string_view predicted, std::string_view gold);

int ExactMatch(std::string_view predicted, std::string_view gold);

bool IsBadCase(double f1, int exact, const EvalOptions& options = {});

// Precedence: WrongRecall (an extra turn overlaps a missing one at or above
// `substitution_threshold`), OverRecall (strict superset), MissingRecall,
// FailureAnswer (recall exact). kNotABadCase when answer_correct is true.
ErrorType ClassifyError(const RecallSet& predicted, const RecallSet& gold,
                        bool answer_correct, std::span<const Turn> history,
                        double substitution_threshold = 0.3);

// Largest bucket not above the count, clamped to [8, 32]. kInvalidArgument
// for counts below 1.
int Bucketize(int turn_count);

// Fills f1, exact, bucket and (for bad cases) error from the texts.
EvalRecord ScoreItem(const QueryContext& q, std::string_view predicted_answer,
                     std::string_view gold_answer, const RecallSet& predicted_recall,
                     const RecallSet& gold_recall, double latency_ms,
                     const EvalOptions& options = {});

// Deterministic JSON report: per-bucket means, overall aggregates and the
// error-type distribution (pooled and per bucket). Keys are emitted in a
// fixed order.
std::string EmitReport(std::span<const EvalRecord> records,
                       const EvalOptions& options = {});

}  // namespace srt

#endif  // SRT_EVAL_H_
