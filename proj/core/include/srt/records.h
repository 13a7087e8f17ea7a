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


// JSON Lines encodings of the toolkit's records. Decoders ignore unknown
// fields and throw kMalformedRecord naming the offending field; encoders emit
// keys in a fixed order so equal records always serialize to equal bytes.

#ifndef SRT_RECORDS_H_
#define SRT_RECORDS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srt/curation.h"
#include "srt/eval.h"
#include "srt/gateway.h"
#include "srt/grpo.h"
#include "srt/model.h"
#include "srt/reward.h"
#include "srt/trace.h"

namespace srt {

// {"id", "turns": [{"index", "speaker", "text"}], "meta": {"query_turns"}?}
// query_turns lists the dependency-bearing query positions found by curation.
struct DialogueRecord {
  Dialogue dialogue;
  std::vector<int> query_turns;
};
DialogueRecord DecodeDialogue(std::string_view line);
std::string EncodeDialogue(const DialogueRecord& record);

// {"dialogue_id", "t", "raw"}
struct TraceRecord {
  std::string dialogue_id;
  int t = 0;
  std::string raw;
};
TraceRecord DecodeTrace(std::string_view line);
std::string EncodeTrace(const TraceRecord& record);

// {"dialogue_id", "t", "gold_recall", "reasoning", "answer"}
struct AnnotationRecord {
  std::string dialogue_id;
  int t = 0;
  AnnotationTriplet triplet;
};
AnnotationRecord DecodeAnnotation(std::string_view line);
std::string EncodeAnnotation(const AnnotationRecord& record);

// {"dialogue_id", "t", "mode", "prompt", "target"}
std::string EncodeSft(std::string_view dialogue_id, int t, const SftInstance& instance);

// {"dialogue_id", "t", "format", "recall", "answer", "total", "predicted_recall"}
std::string EncodeReward(std::string_view dialogue_id, int t,
                         const RewardBreakdown& reward);

// Prediction input for offline evaluation. Either "raw" (a full trace, from
// which the answer and recall set are extracted) or "answer" (with an
// optional "predicted_recall") must be present; "latency_ms" defaults to 0.
struct PredictionRecord {
  std::string dialogue_id;
  int t = 0;
  std::optional<std::string> raw;
  std::string answer;
  RecallSet predicted_recall;
  double latency_ms = 0.0;
};
PredictionRecord DecodePrediction(std::string_view line);

// {"dialogue_id", "t", "bucket", "f1", "exact", "latency_ms",
//  "predicted_recall", "gold_recall", "error"?, "failure"?}
std::string EncodeEvalRecord(const EvalRecord& record);

// {"dialogue_id", "t", "history": [turn], "query", "gold_answer", "gold_recall"}
EvalItem DecodeEvalItem(std::string_view line);
std::string EncodeEvalItem(const EvalItem& item);

// {"members": [{"reward", "policy", "old", "reference"}],
//  "params": {"eps_adv", "eps_clip", "beta"}?}
struct GroupFile {
  RolloutGroup group;
  GrpoParams params;
};
// Parameters absent from "params" keep the values in `defaults`.
GroupFile DecodeGroupFile(std::string_view document, const GrpoParams& defaults = {});

}  // namespace srt

#endif  // SRT_RECORDS_H_
