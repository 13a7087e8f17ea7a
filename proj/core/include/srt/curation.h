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

// Dataset construction: deduplication, length filtering, dependency-based
// dialogue selection, history pruning, annotation verification and SFT
// instance rendering.

#ifndef SRT_CURATION_H_
#define SRT_CURATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srt/align.h"
#include "srt/embedding.h"
#include "srt/model.h"
#include "srt/trace.h"

namespace srt {

// Score(u_i, Q_t) = w_sem * sim + w_dist * exp(-decay * |t - i|); a pair
// qualifies when the score is strictly above `threshold`.
struct DependencyScoreParams {
  double w_sem = 0.6;
  double w_dist = 0.4;
  double decay = 0.15;
  double threshold = 0.6;

  // Throws kInvalidArgument for non-positive decay, a threshold outside
  // (0, 1) or negative weights.
  void Validate() const;
};

// Precondition: u.index < q.t (kPreconditionViolated otherwise).
double DependencyScore(const Turn& u, const QueryContext& q, double sim,
                       const DependencyScoreParams& params);

// Semantic similarity between two turns of one dialogue, addressed by flat
// index, clamped to [0, 1].
using TurnSimilarity = std::function<double(int history_index, int query_index)>;

// Cosine similarity of provider embeddings, clamped to [0, 1]; each turn is
// embedded once.
TurnSimilarity EmbeddingTurnSimilarity(const Dialogue& dialogue,
                                       const EmbeddingProvider& provider);

// Similarity of each history turn to the query text, clamped to [0, 1].
std::vector<double> QuerySimilarities(const QueryContext& q,
                                      const EmbeddingProvider& provider);

// Per-dialogue fingerprint: hash of each normalized turn text, in order.
std::vector<uint64_t> DialogueFingerprint(const Dialogue& dialogue);

struct DedupOptions {
  // Also collapse dialogues whose fingerprints differ in fewer than
  // `near_fraction` of positions (length differences count as mismatches).
  bool near_duplicates = false;
  double near_fraction = 0.1;
};

// Positions of the dialogues that survive deduplication, ascending.
std::vector<std::size_t> DedupSurvivors(std::span<const Dialogue> dialogues,
                                        const DedupOptions& options = {});
std::vector<Dialogue> Dedup(std::span<const Dialogue> dialogues,
                            const DedupOptions& options = {});

// Inclusive bounds; kInvalidArgument if min > max.
bool FilterTurnCount(const Dialogue& dialogue, int min_turns, int max_turns);

// User turns t >= 2 with at least one earlier turn whose dependency score
// exceeds the threshold.
std::vector<int> DependencyQueries(const Dialogue& dialogue,
                                   const DependencyScoreParams& params,
                                   const TurnSimilarity& similarity);

bool SelectDialogue(const Dialogue& dialogue, const DependencyScoreParams& params,
                    const TurnSimilarity& similarity);

// Keeps history turns scoring above the threshold, every gold turn and the
// last two history turns, in original order. `similarities[i]` belongs to
// q.history[i]. Throws kGoldOutOfRange if a gold index is not in the history.
std::vector<Turn> PruneHistory(const QueryContext& q, const RecallSet& gold,
                               const DependencyScoreParams& params,
                               std::span<const double> similarities);

enum class VerifyIssue { kConsistency, kHallucination };

std::string_view VerifyIssueName(VerifyIssue issue);

struct VerifyReason {
  VerifyIssue issue;
  std::string detail;
};

struct VerifyResult {
  bool pass = true;
  std::vector<VerifyReason> reasons;
};

// Consistency: the reasoning's citations resolve exactly onto the gold recall
// set. Grounding: every answer token that contains a digit or has at least
// four characters occurs in the gold turns or the query.
VerifyResult VerifyTriplet(const AnnotationTriplet& triplet, const QueryContext& q,
                           double match_threshold = kDefaultMatchThreshold,
                           const TraceGrammar& grammar = {});

enum class SftMode { kPruned, kFull };

std::string_view SftModeName(SftMode mode);
SftMode ParseSftMode(std::string_view name);

struct SftInstance {
  std::string prompt;
  std::string target;
  SftMode mode = SftMode::kFull;
};

// First line of every SFT prompt.
extern const std::string_view kSftSystemLine;

// Prompt lines: the system line, "Turn {index} ({speaker}): {text}" per
// context turn, then "Current query (turn {t}): {query}". Line breaks inside
// texts are flattened to spaces. Target: reasoning, newline, "Answer: "
// answer.
SftInstance BuildSftInstance(const QueryContext& q, std::span<const Turn> context,
                             const AnnotationTriplet& triplet, SftMode mode);

}  // namespace srt

#endif  // SRT_CURATION_H_
