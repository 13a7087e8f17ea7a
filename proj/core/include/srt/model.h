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

// Shared dialogue and trace types.

#ifndef SRT_MODEL_H_
#define SRT_MODEL_H_

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srt {

enum class Speaker { kUser, kAssistant };

std::string_view SpeakerName(Speaker speaker);
// Accepts "user" / "assistant"; throws kInvalidArgument otherwise.
Speaker ParseSpeaker(std::string_view name);

// One utterance. `index` is the 1-based flat position in its dialogue.
struct Turn {
  int index = 0;
  Speaker speaker = Speaker::kUser;
  std::string text;

  friend bool operator==(const Turn&, const Turn&) = default;
};

// Ordered utterances with contiguous indices 1..n. Consecutive turns may share
// a speaker.
class Dialogue {
 public:
  // Throws kInvalidArgument unless indices are exactly 1..n and every text is
  // non-blank.
  Dialogue(std::string id, std::vector<Turn> turns);

  const std::string& id() const { return id_; }
  const std::vector<Turn>& turns() const { return turns_; }
  std::size_t size() const { return turns_.size(); }
  const Turn& turn(int index) const { return turns_.at(index - 1); }

 private:
  std::string id_;
  std::vector<Turn> turns_;
};

// The query at turn `t` and every turn before it.
struct QueryContext {
  std::string dialogue_id;
  int t = 0;
  std::string query;
  std::vector<Turn> history;

  // Throws kInvalidArgument if t is outside 2..n.
  static QueryContext FromDialogue(const Dialogue& dialogue, int t);
};

// A set of flat turn indices (gold H* or predicted H-hat).
class RecallSet {
 public:
  RecallSet() = default;
  RecallSet(std::initializer_list<int> indices);
  explicit RecallSet(std::span<const int> indices);

  void Insert(int index) { indices_.insert(index); }
  bool Contains(int index) const { return indices_.count(index) > 0; }
  bool empty() const { return indices_.empty(); }
  std::size_t size() const { return indices_.size(); }
  const std::set<int>& indices() const { return indices_; }
  std::vector<int> ToVector() const { return {indices_.begin(), indices_.end()}; }

  std::size_t IntersectionSize(const RecallSet& other) const;
  std::size_t UnionSize(const RecallSet& other) const;
  // True iff every index is the index of some turn in `history`.
  bool WithinHistory(std::span<const Turn> history) const;

  friend bool operator==(const RecallSet&, const RecallSet&) = default;

 private:
  std::set<int> indices_;
};

// Turn reference written in front of a quoted utterance: "Q3:", "A5:" or
// "Turn 7:". Q/A count user/assistant turns; Turn counts flat positions.
struct Marker {
  enum class Kind { kQuestion, kAnswer, kTurn };
  Kind kind = Kind::kTurn;
  int number = 0;

  std::string ToString() const;
  friend bool operator==(const Marker&, const Marker&) = default;
};

// Resolves a marker against a history. Returns the flat index, or nullopt if
// the referenced turn does not exist in `history`.
std::optional<int> ResolveMarker(const Marker& marker,
                                 std::span<const Turn> history);

// Returns the turn with flat index `index`, or nullptr.
const Turn* FindTurn(std::span<const Turn> history, int index);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  friend bool operator==(const Span&, const Span&) = default;
};

// One recall action: a verbatim quote inside a <HIS> region.
struct Citation {
  std::optional<Marker> marker;
  std::string quoted_text;
  Span span;  // byte offsets of the citation (marker included) in the raw trace
};

struct TraceSegment {
  enum class Kind { kReasoning, kRecall };
  Kind kind = Kind::kReasoning;
  // For kRecall this is the raw content between the tags.
  std::string text;
};

// Parsed chain of thought: reasoning text interleaved with <HIS> regions,
// followed by the final answer.
struct ReasoningTrace {
  std::string raw;
  std::vector<TraceSegment> segments;
  std::vector<Citation> citations;  // in order of appearance
  std::string answer;
  bool has_answer = false;

  std::vector<std::string> Steps() const;
};

}  // namespace srt

#endif  // SRT_MODEL_H_
