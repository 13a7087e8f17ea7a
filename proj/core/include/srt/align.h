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

#ifndef SRT_ALIGN_H_
#define SRT_ALIGN_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "srt/model.h"

namespace srt {

inline constexpr double kDefaultMatchThreshold = 0.3;

// Jaccard index of the normalized token sets of the two texts; 0 when both
// are empty.
double OverlapScore(std::string_view cited, std::string_view utterance);

struct CitationAlignment {
  int citation_ordinal = 0;  // 0-based position in the trace
  std::optional<int> resolved;
  double score = 0.0;  // overlap with the resolved turn, or the best overlap
};

struct AlignmentResult {
  std::vector<CitationAlignment> per_citation;
  RecallSet predicted;
};

// A marker that resolves in `history` wins outright. Otherwise the turn with
// the highest overlap is chosen (earliest on ties) if it reaches
// `match_threshold`, which must lie in (0, 1].
CitationAlignment AlignCitation(const Citation& citation,
                                std::span<const Turn> history,
                                double match_threshold = kDefaultMatchThreshold);

AlignmentResult PredictedRecallSet(const ReasoningTrace& trace,
                                   std::span<const Turn> history,
                                   double match_threshold = kDefaultMatchThreshold);

}  // namespace srt

#endif  // SRT_ALIGN_H_
