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


#include "srt/records.h"

#include "json.hpp"
#include "srt/error.h"

namespace srt {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

Json Parse(std::string_view text) {
  try {
    Json j = Json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::kMalformedRecord, "record is not an object");
    return j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T Field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kMalformedRecord, std::string("missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kMalformedRecord, std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T OptionalField(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? Field<T>(j, key) : fallback;
}

// Domain-level validation failures inside a record are data errors too.
template <typename Fn>
auto Guard(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedRecord) throw;
    throw Error(ErrorCode::kMalformedRecord, e.what());
  }
}

std::vector<Turn> DecodeTurns(const Json& turns) {
  if (!turns.is_array()) throw Error(ErrorCode::kMalformedRecord, "field 'turns' must be an array");
  std::vector<Turn> out;
  for (const Json& t : turns) {
    if (!t.is_object()) throw Error(ErrorCode::kMalformedRecord, "turn is not an object");
    out.push_back({Field<int>(t, "index"),
                   Guard([&] { return ParseSpeaker(Field<std::string>(t, "speaker")); }),
                   Field<std::string>(t, "text")});
  }
  return out;
}

OrderedJson EncodeTurns(std::span<const Turn> turns) {
  OrderedJson out = OrderedJson::array();
  for (const Turn& t : turns) {
    OrderedJson j;
    j["index"] = t.index;
    j["speaker"] = std::string(SpeakerName(t.speaker));
    j["text"] = t.text;
    out.push_back(std::move(j));
  }
  return out;
}

RecallSet DecodeRecall(const Json& j, const char* key) {
  const std::vector<int> indices = Field<std::vector<int>>(j, key);
  for (int i : indices) {
    if (i < 1) {
      throw Error(ErrorCode::kMalformedRecord,
                  std::string("field '") + key + "' holds a non-positive index");
    }
  }
  return RecallSet(indices);
}

int DecodeQueryTurn(const Json& j) {
  const int t = Field<int>(j, "t");
  if (t < 1) throw Error(ErrorCode::kMalformedRecord, "field 't' must be positive");
  return t;
}

}  // namespace

DialogueRecord DecodeDialogue(std::string_view line) {
  const Json j = Parse(line);
  const auto id = Field<std::string>(j, "id");
  std::vector<Turn> turns = DecodeTurns(j.contains("turns") ? j["turns"] : Json());
  DialogueRecord record{Guard([&] { return Dialogue(id, std::move(turns)); }), {}};
  if (j.contains("meta") && j["meta"].is_object() && j["meta"].contains("query_turns")) {
    record.query_turns = Field<std::vector<int>>(j["meta"], "query_turns");
  }
  return record;
}

std::string EncodeDialogue(const DialogueRecord& record) {
  OrderedJson j;
  j["id"] = record.dialogue.id();
  j["turns"] = EncodeTurns(record.dialogue.turns());
  if (!record.query_turns.empty()) j["meta"]["query_turns"] = record.query_turns;
  return j.dump();
}

TraceRecord DecodeTrace(std::string_view line) {
  const Json j = Parse(line);
  return {Field<std::string>(j, "dialogue_id"), DecodeQueryTurn(j),
          Field<std::string>(j, "raw")};
}

std::string EncodeTrace(const TraceRecord& record) {
  OrderedJson j;
  j["dialogue_id"] = record.dialogue_id;
  j["t"] = record.t;
  j["raw"] = record.raw;
  return j.dump();
}

AnnotationRecord DecodeAnnotation(std::string_view line) {
  const Json j = Parse(line);
  AnnotationRecord record;
  record.dialogue_id = Field<std::string>(j, "dialogue_id");
  record.t = DecodeQueryTurn(j);
  record.triplet.gold_recall = DecodeRecall(j, "gold_recall");
  record.triplet.reasoning = Field<std::string>(j, "reasoning");
  record.triplet.answer = Field<std::string>(j, "answer");
  return record;
}

std::string EncodeAnnotation(const AnnotationRecord& record) {
  OrderedJson j;
  j["dialogue_id"] = record.dialogue_id;
  j["t"] = record.t;
  j["gold_recall"] = record.triplet.gold_recall.ToVector();
  j["reasoning"] = record.triplet.reasoning;
  j["answer"] = record.triplet.answer;
  return j.dump();
}

std::string EncodeSft(std::string_view dialogue_id, int t, const SftInstance& instance) {
  OrderedJson j;
  j["dialogue_id"] = dialogue_id;
  j["t"] = t;
  j["mode"] = std::string(SftModeName(instance.mode));
  j["prompt"] = instance.prompt;
  j["target"] = instance.target;
  return j.dump();
}

std::string EncodeReward(std::string_view dialogue_id, int t,
                         const RewardBreakdown& reward) {
  OrderedJson j;
  j["dialogue_id"] = dialogue_id;
  j["t"] = t;
  j["format"] = reward.format;
  j["recall"] = reward.recall;
  j["answer"] = reward.answer;
  j["total"] = reward.total;
  j["predicted_recall"] = reward.predicted_recall.ToVector();
  return j.dump();
}

PredictionRecord DecodePrediction(std::string_view line) {
  const Json j = Parse(line);
  PredictionRecord record;
  record.dialogue_id = Field<std::string>(j, "dialogue_id");
  record.t = DecodeQueryTurn(j);
  if (j.contains("raw")) {
    record.raw = Field<std::string>(j, "raw");
  } else {
    record.answer = Field<std::string>(j, "answer");
    if (j.contains("predicted_recall")) {
      record.predicted_recall = DecodeRecall(j, "predicted_recall");
    }
  }
  record.latency_ms = OptionalField<double>(j, "latency_ms", 0.0);
  if (!(record.latency_ms >= 0.0)) {
    throw Error(ErrorCode::kMalformedRecord, "field 'latency_ms' must be >= 0");
  }
  return record;
}

std::string EncodeEvalRecord(const EvalRecord& record) {
  OrderedJson j;
  j["dialogue_id"] = record.dialogue_id;
  j["t"] = record.t;
  j["bucket"] = record.bucket;
  j["f1"] = record.f1;
  j["exact"] = record.exact;
  j["latency_ms"] = record.latency_ms;
  j["predicted_recall"] = record.predicted_recall.ToVector();
  j["gold_recall"] = record.gold_recall.ToVector();
  if (record.error) j["error"] = std::string(ErrorTypeKey(*record.error));
  if (record.failure) j["failure"] = *record.failure;
  return j.dump();
}

EvalItem DecodeEvalItem(std::string_view line) {
  const Json j = Parse(line);
  EvalItem item;
  item.context.dialogue_id = Field<std::string>(j, "dialogue_id");
  item.context.t = DecodeQueryTurn(j);
  item.context.query = Field<std::string>(j, "query");
  item.context.history = DecodeTurns(j.contains("history") ? j["history"] : Json());
  for (const Turn& turn : item.context.history) {
    if (turn.index < 1 || turn.index >= item.context.t) {
      throw Error(ErrorCode::kMalformedRecord,
                  "history turn " + std::to_string(turn.index) +
                      " is not before the query turn");
    }
  }
  item.gold_answer = Field<std::string>(j, "gold_answer");
  item.gold_recall = DecodeRecall(j, "gold_recall");
  if (!item.gold_recall.WithinHistory(item.context.history)) {
    throw Error(ErrorCode::kMalformedRecord, "gold_recall refers to a turn outside the history");
  }
  return item;
}

std::string EncodeEvalItem(const EvalItem& item) {
  OrderedJson j;
  j["dialogue_id"] = item.context.dialogue_id;
  j["t"] = item.context.t;
  j["history"] = EncodeTurns(item.context.history);
  j["query"] = item.context.query;
  j["gold_answer"] = item.gold_answer;
  j["gold_recall"] = item.gold_recall.ToVector();
  return j.dump();
}

GroupFile DecodeGroupFile(std::string_view document, const GrpoParams& defaults) {
  const Json j = Parse(document);
  GroupFile file;
  file.params = defaults;
  const auto members = j.find("members");
  if (members == j.end() || !members->is_array() || members->empty()) {
    throw Error(ErrorCode::kMalformedRecord, "field 'members' must be a non-empty array");
  }
  for (const Json& m : *members) {
    if (!m.is_object()) throw Error(ErrorCode::kMalformedRecord, "member is not an object");
    file.group.members.push_back(Guard([&] {
      return RolloutMember{Field<double>(m, "reward"),
                           TokenLogprobs(Field<std::vector<double>>(m, "policy")),
                           TokenLogprobs(Field<std::vector<double>>(m, "old")),
                           TokenLogprobs(Field<std::vector<double>>(m, "reference"))};
    }));
  }
  if (j.contains("params")) {
    const Json& p = j["params"];
    if (!p.is_object()) throw Error(ErrorCode::kMalformedRecord, "field 'params' must be an object");
    for (const auto& [key, value] : p.items()) {
      if (key != "eps_adv" && key != "eps_clip" && key != "beta") {
        throw Error(ErrorCode::kMalformedRecord, "unknown GRPO parameter '" + key + "'");
      }
    }
    file.params.eps_adv = OptionalField<double>(p, "eps_adv", file.params.eps_adv);
    file.params.eps_clip = OptionalField<double>(p, "eps_clip", file.params.eps_clip);
    file.params.beta = OptionalField<double>(p, "beta", file.params.beta);
  }
  Guard([&] { file.params.Validate(); return 0; });
  return file;
}

}  // namespace srt
