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

// Rule-based composite reward for a sampled reasoning trace:
//
//   total = format + recall + answer
//
// format is 1 for a well-formed trace and 0 otherwise, recall is the
// Jaccard index of predicted vs. gold recall sets mapped affinely onto
// [-1.25, 1.25], and answer is the cosine similarity of answer embeddings.

#ifndef SRT_REWARD_H_
#define SRT_REWARD_H_

#include <string_view>

#include "srt/align.h"
#include "srt/embedding.h"
#include "srt/model.h"
#include "srt/trace.h"

namespace srt {

inline constexpr double kRecallRewardMax = 1.25;
inline constexpr double kRecallRewardMin = -1.25;

struct RewardWeights {
  double format = 1.0;
  double recall = 1.0;
  double answer = 1.0;
};

struct RewardOptions {
  double match_threshold = kDefaultMatchThreshold;
  RewardWeights weights;
  TraceGrammar grammar;
};

struct RewardBreakdown {
  int format = 0;
  double recall = 0.0;
  double answer = 0.0;
  double total = 0.0;
  RecallSet predicted_recall;
};

int FormatReward(std::string_view raw, const TraceGrammar& grammar = {});

// 2.5 * |P ∩ G| / |P ∪ G| - 1.25. Two empty sets count as a perfect match.
double RecallReward(const RecallSet& predicted, const RecallSet& gold);

double AnswerReward(std::string_view predicted, std::string_view gold,
                    const EmbeddingProvider& provider);

// Malformed traces still earn recall and answer reward from a lenient parse.
RewardBreakdown CompositeReward(std::string_view raw_trace, const QueryContext& q,
                                const AnnotationTriplet& gold,
                                const EmbeddingProvider& provider,
                                const RewardOptions& options = {});

}  // namespace srt

#endif  // SRT_REWARD_H_
