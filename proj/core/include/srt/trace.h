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

// Grammar and extraction for <HIS>-tagged reasoning traces.
//
// A trace is free reasoning text with zero or more <HIS>...</HIS> regions,
// followed by an answer introduced by a delimiter ("Answer:" by default).
// Inside a region, quotes may be prefixed with turn markers "Q<k>:", "A<k>:"
// or "Turn <n>:"; each marker starts a new citation.
//
// The answer delimiter is the last occurrence of the delimiter outside any
// tagged region, preferring occurrences at the start of a line.

#ifndef SRT_TRACE_H_
#define SRT_TRACE_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srt/model.h"

namespace srt {

struct TraceGrammar {
  std::string open_tag = "<HIS>";
  std::string close_tag = "</HIS>";
  std::string answer_delimiter = "Answer:";
};

enum class ViolationCode {
  kUnclosedTag,
  kUnopenedClose,
  kNestedTag,
  kEmptyCitation,
  kTagInAnswer,
};

std::string_view ViolationCodeName(ViolationCode code);

struct FormatViolation {
  ViolationCode code;
  Span span;
};

struct FormatVerdict {
  bool valid = true;
  std::vector<FormatViolation> violations;

  bool Has(ViolationCode code) const;
};

// Total over arbitrary input. A trace is valid iff every open tag is closed
// later, tags never nest, every region (and every marked quote in it) has
// non-blank content, and no tag follows the answer delimiter.
FormatVerdict ValidateFormat(std::string_view raw,
                             const TraceGrammar& grammar = {});

// Throws kPreconditionViolated if ValidateFormat(raw) is not valid.
ReasoningTrace ParseTrace(std::string_view raw, const TraceGrammar& grammar = {});

// Best-effort parse for malformed traces: only top-level, non-nested, closed
// regions contribute citations. Identical to ParseTrace on valid input.
ReasoningTrace ParseTraceLenient(std::string_view raw,
                                 const TraceGrammar& grammar = {});

// Inverse of ParseTrace up to whitespace: segments joined by single spaces,
// then a newline, the delimiter and the answer when has_answer is set.
std::string RenderTrace(const ReasoningTrace& trace,
                        const TraceGrammar& grammar = {});

// Teacher output (H*, Z, A*).
struct AnnotationTriplet {
  RecallSet gold_recall;
  // (turn index, quoted content) for each "Turn X: 'content'" line.
  std::vector<std::pair<int, std::string>> recall_lines;
  std::string reasoning;
  std::string answer;
};

// Parses a response with "RECALL:", "REASONING:" and "ANSWER:" sections. The
// recall section holds one "Turn X: 'content'" line per recalled turn (or the
// single word "none"). Throws kMalformedAnnotation naming the first offending
// line or the missing section.
AnnotationTriplet ParseTeacherAnnotation(std::string_view raw,
                                         const TraceGrammar& grammar = {});

}  // namespace srt

#endif  // SRT_TRACE_H_
