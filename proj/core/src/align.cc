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

#include "srt/align.h"

#include <set>
#include <string>

#include "srt/error.h"
#include "srt/text.h"

namespace srt {
namespace {

using TokenSet = std::set<std::string>;

TokenSet TokenSetOf(std::string_view text) {
  const std::vector<std::string> tokens = NormalizedTokens(text);
  return {tokens.begin(), tokens.end()};
}

double Jaccard(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const std::string& token : a) shared += b.count(token);
  return static_cast<double>(shared) /
         static_cast<double>(a.size() + b.size() - shared);
}

CitationAlignment Align(const Citation& citation, std::span<const Turn> history,
                        std::span<const TokenSet> history_tokens,
                        double match_threshold) {
  if (!(match_threshold > 0.0 && match_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "match threshold must lie in (0, 1]");
  }
  CitationAlignment out;
  const TokenSet cited = TokenSetOf(citation.quoted_text);
  if (citation.marker) {
    if (const auto index = ResolveMarker(*citation.marker, history)) {
      out.resolved = *index;
      for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i].index == *index) {
          out.score = Jaccard(cited, history_tokens[i]);
        }
      }
      return out;
    }
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double score = Jaccard(cited, history_tokens[i]);
    if (!best || score > out.score ||
        (score == out.score && history[i].index < history[*best].index)) {
      best = i;
      out.score = score;
    }
  }
  if (best && out.score >= match_threshold) out.resolved = history[*best].index;
  return out;
}

std::vector<TokenSet> HistoryTokens(std::span<const Turn> history) {
  std::vector<TokenSet> out;
  out.reserve(history.size());
  for (const Turn& turn : history) out.push_back(TokenSetOf(turn.text));
  return out;
}

}  // namespace

double OverlapScore(std::string_view cited, std::string_view utterance) {
  return Jaccard(TokenSetOf(cited), TokenSetOf(utterance));
}

CitationAlignment AlignCitation(const Citation& citation,
                                std::span<const Turn> history,
                                double match_threshold) {
  const std::vector<TokenSet> tokens = HistoryTokens(history);
  return Align(citation, history, tokens, match_threshold);
}

AlignmentResult PredictedRecallSet(const ReasoningTrace& trace,
                                   std::span<const Turn> history,
                                   double match_threshold) {
  const std::vector<TokenSet> tokens = HistoryTokens(history);
  AlignmentResult result;
  for (std::size_t k = 0; k < trace.citations.size(); ++k) {
    CitationAlignment a =
        Align(trace.citations[k], history, tokens, match_threshold);
    a.citation_ordinal = static_cast<int>(k);
    if (a.resolved) result.predicted.Insert(*a.resolved);
    result.per_citation.push_back(a);
  }
  return result;
}

}  // namespace srt
