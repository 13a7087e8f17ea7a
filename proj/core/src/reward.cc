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

#include "srt/reward.h"

namespace srt {

int FormatReward(std::string_view raw, const TraceGrammar& grammar) {
  return ValidateFormat(raw, grammar).valid ? 1 : 0;
}

double RecallReward(const RecallSet& predicted, const RecallSet& gold) {
  const std::size_t union_size = predicted.UnionSize(gold);
  if (union_size == 0) return kRecallRewardMax;
  const double jaccard = static_cast<double>(predicted.IntersectionSize(gold)) /
                         static_cast<double>(union_size);
  return 2.5 * jaccard - 1.25;
}

double AnswerReward(std::string_view predicted, std::string_view gold,
                    const EmbeddingProvider& provider) {
  const std::vector<double> a = provider.Embed(predicted);
  const std::vector<double> b = provider.Embed(gold);
  return CosineSimilarity(a, b);
}

RewardBreakdown CompositeReward(std::string_view raw_trace, const QueryContext& q,
                                const AnnotationTriplet& gold,
                                const EmbeddingProvider& provider,
                                const RewardOptions& options) {
  RewardBreakdown out;
  out.format = FormatReward(raw_trace, options.grammar);
  const ReasoningTrace trace = ParseTraceLenient(raw_trace, options.grammar);
  out.predicted_recall =
      PredictedRecallSet(trace, q.history, options.match_threshold).predicted;
  out.recall = RecallReward(out.predicted_recall, gold.gold_recall);
  out.answer = AnswerReward(trace.answer, gold.answer, provider);
  out.total = options.weights.format * out.format +
              options.weights.recall * out.recall +
              options.weights.answer * out.answer;
  return out;
}

}  // namespace srt
