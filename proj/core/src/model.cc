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

#include "srt/model.h"

#include <algorithm>

#include "srt/error.h"
#include "srt/text.h"

namespace srt {

std::string_view SpeakerName(Speaker speaker) {
  return speaker == Speaker::kUser ? "user" : "assistant";
}

Speaker ParseSpeaker(std::string_view name) {
  if (name == "user") return Speaker::kUser;
  if (name == "assistant") return Speaker::kAssistant;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown speaker '" + std::string(name) + "'");
}

Dialogue::Dialogue(std::string id, std::vector<Turn> turns)
    : id_(std::move(id)), turns_(std::move(turns)) {
  for (std::size_t i = 0; i < turns_.size(); ++i) {
    const Turn& turn = turns_[i];
    if (turn.index != static_cast<int>(i) + 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dialogue '" + id_ + "': turn at position " +
                      std::to_string(i + 1) + " has index " +
                      std::to_string(turn.index));
    }
    if (TrimAscii(turn.text).empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dialogue '" + id_ + "': turn " + std::to_string(turn.index) +
                      " is blank");
    }
  }
}

QueryContext QueryContext::FromDialogue(const Dialogue& dialogue, int t) {
  if (t < 2 || t > static_cast<int>(dialogue.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "dialogue '" + dialogue.id() + "': query turn " +
                    std::to_string(t) + " out of range 2.." +
                    std::to_string(dialogue.size()));
  }
  QueryContext q;
  q.dialogue_id = dialogue.id();
  q.t = t;
  q.query = dialogue.turn(t).text;
  q.history.assign(dialogue.turns().begin(), dialogue.turns().begin() + (t - 1));
  return q;
}

RecallSet::RecallSet(std::initializer_list<int> indices)
    : indices_(indices.begin(), indices.end()) {}

RecallSet::RecallSet(std::span<const int> indices)
    : indices_(indices.begin(), indices.end()) {}

std::size_t RecallSet::IntersectionSize(const RecallSet& other) const {
  std::size_t n = 0;
  for (int index : indices_) n += other.Contains(index) ? 1 : 0;
  return n;
}

std::size_t RecallSet::UnionSize(const RecallSet& other) const {
  return size() + other.size() - IntersectionSize(other);
}

bool RecallSet::WithinHistory(std::span<const Turn> history) const {
  return std::all_of(indices_.begin(), indices_.end(), [&](int index) {
    return FindTurn(history, index) != nullptr;
  });
}

std::string Marker::ToString() const {
  switch (kind) {
    case Kind::kQuestion: return "Q" + std::to_string(number);
    case Kind::kAnswer: return "A" + std::to_string(number);
    case Kind::kTurn: return "Turn " + std::to_string(number);
  }
  return {};
}

std::optional<int> ResolveMarker(const Marker& marker,
                                 std::span<const Turn> history) {
  if (marker.number < 1) return std::nullopt;
  if (marker.kind == Marker::Kind::kTurn) {
    if (FindTurn(history, marker.number) == nullptr) return std::nullopt;
    return marker.number;
  }
  const Speaker wanted = marker.kind == Marker::Kind::kQuestion
                             ? Speaker::kUser
                             : Speaker::kAssistant;
  int seen = 0;
  for (const Turn& turn : history) {
    if (turn.speaker == wanted && ++seen == marker.number) return turn.index;
  }
  return std::nullopt;
}

const Turn* FindTurn(std::span<const Turn> history, int index) {
  // Histories are usually contiguous from 1, so try the direct slot first.
  if (index >= 1 && static_cast<std::size_t>(index) <= history.size() &&
      history[index - 1].index == index) {
    return &history[index - 1];
  }
  for (const Turn& turn : history) {
    if (turn.index == index) return &turn;
  }
  return nullptr;
}

std::vector<std::string> ReasoningTrace::Steps() const {
  std::vector<std::string> steps;
  for (const TraceSegment& segment : segments) {
    if (segment.kind == TraceSegment::Kind::kReasoning) {
      steps.push_back(segment.text);
    }
  }
  return steps;
}

}  // namespace srt
