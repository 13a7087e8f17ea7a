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

#include "srt/curation.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <set>

#include "srt/error.h"
#include "srt/text.h"

namespace srt {
namespace {

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double ScoreAtGap(int gap, double sim, const DependencyScoreParams& p) {
  return p.w_sem * sim + p.w_dist * std::exp(-p.decay * std::abs(gap));
}

std::string OneLine(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

bool HasDigit(std::string_view token) {
  return std::any_of(token.begin(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

void DependencyScoreParams::Validate() const {
  if (!(decay > 0.0)) throw Error(ErrorCode::kInvalidArgument, "decay must be > 0");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  }
  if (w_sem < 0.0 || w_dist < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "score weights must be >= 0");
  }
}

double DependencyScore(const Turn& u, const QueryContext& q, double sim,
                       const DependencyScoreParams& params) {
  if (u.index >= q.t) {
    throw Error(ErrorCode::kPreconditionViolated,
                "history turn " + std::to_string(u.index) +
                    " is not before query turn " + std::to_string(q.t));
  }
  return ScoreAtGap(q.t - u.index, sim, params);
}

TurnSimilarity EmbeddingTurnSimilarity(const Dialogue& dialogue,
                                       const EmbeddingProvider& provider) {
  auto embeddings = std::make_shared<std::vector<std::vector<double>>>();
  embeddings->reserve(dialogue.size());
  for (const Turn& turn : dialogue.turns()) {
    embeddings->push_back(provider.Embed(turn.text));
  }
  return [embeddings](int i, int t) {
    return Clamp01(CosineSimilarity((*embeddings)[i - 1], (*embeddings)[t - 1]));
  };
}

std::vector<double> QuerySimilarities(const QueryContext& q,
                                      const EmbeddingProvider& provider) {
  const std::vector<double> query = provider.Embed(q.query);
  std::vector<double> out;
  out.reserve(q.history.size());
  for (const Turn& turn : q.history) {
    out.push_back(Clamp01(CosineSimilarity(provider.Embed(turn.text), query)));
  }
  return out;
}

std::vector<uint64_t> DialogueFingerprint(const Dialogue& dialogue) {
  std::vector<uint64_t> fp;
  fp.reserve(dialogue.size());
  for (const Turn& turn : dialogue.turns()) {
    fp.push_back(Fnv1a64(NormalizeText(turn.text)));
  }
  return fp;
}

std::vector<std::size_t> DedupSurvivors(std::span<const Dialogue> dialogues,
                                        const DedupOptions& options) {
  std::vector<std::size_t> survivors;
  std::set<std::vector<uint64_t>> seen;
  std::vector<std::vector<uint64_t>> kept;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    std::vector<uint64_t> fp = DialogueFingerprint(dialogues[i]);
    if (seen.count(fp) > 0) continue;
    if (options.near_duplicates) {
      const bool near = std::any_of(kept.begin(), kept.end(), [&](const auto& other) {
        const std::size_t longest = std::max(fp.size(), other.size());
        if (longest == 0) return true;
        const std::size_t common = std::min(fp.size(), other.size());
        std::size_t differing = longest - common;
        for (std::size_t k = 0; k < common; ++k) differing += fp[k] != other[k];
        return static_cast<double>(differing) <
               options.near_fraction * static_cast<double>(longest);
      });
      if (near) continue;
      kept.push_back(fp);
    }
    seen.insert(std::move(fp));
    survivors.push_back(i);
  }
  return survivors;
}

std::vector<Dialogue> Dedup(std::span<const Dialogue> dialogues,
                            const DedupOptions& options) {
  std::vector<Dialogue> out;
  for (std::size_t i : DedupSurvivors(dialogues, options)) out.push_back(dialogues[i]);
  return out;
}

bool FilterTurnCount(const Dialogue& dialogue, int min_turns, int max_turns) {
  if (min_turns > max_turns) {
    throw Error(ErrorCode::kInvalidArgument, "min turns exceeds max turns");
  }
  const auto n = static_cast<int>(dialogue.size());
  return n >= min_turns && n <= max_turns;
}

std::vector<int> DependencyQueries(const Dialogue& dialogue,
                                   const DependencyScoreParams& params,
                                   const TurnSimilarity& similarity) {
  std::vector<int> queries;
  for (const Turn& q : dialogue.turns()) {
    if (q.speaker != Speaker::kUser || q.index < 2) continue;
    for (int i = 1; i < q.index; ++i) {
      if (ScoreAtGap(q.index - i, Clamp01(similarity(i, q.index)), params) >
          params.threshold) {
        queries.push_back(q.index);
        break;
      }
    }
  }
  return queries;
}

bool SelectDialogue(const Dialogue& dialogue, const DependencyScoreParams& params,
                    const TurnSimilarity& similarity) {
  return !DependencyQueries(dialogue, params, similarity).empty();
}

std::vector<Turn> PruneHistory(const QueryContext& q, const RecallSet& gold,
                               const DependencyScoreParams& params,
                               std::span<const double> similarities) {
  if (similarities.size() != q.history.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one similarity per history turn is required");
  }
  for (int index : gold.indices()) {
    if (FindTurn(q.history, index) == nullptr) {
      throw Error(ErrorCode::kGoldOutOfRange,
                  "gold turn " + std::to_string(index) + " is not in the history of " +
                      q.dialogue_id + " turn " + std::to_string(q.t));
    }
  }
  std::vector<Turn> pruned;
  const std::size_t n = q.history.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Turn& turn = q.history[k];
    const bool keep = gold.Contains(turn.index) || k + 2 >= n ||
                      DependencyScore(turn, q, Clamp01(similarities[k]), params) >
                          params.threshold;
    if (keep) pruned.push_back(turn);
  }
  return pruned;
}

std::string_view VerifyIssueName(VerifyIssue issue) {
  return issue == VerifyIssue::kConsistency ? "CONSISTENCY" : "HALLUCINATION";
}

VerifyResult VerifyTriplet(const AnnotationTriplet& triplet, const QueryContext& q,
                           double match_threshold, const TraceGrammar& grammar) {
  VerifyResult result;
  auto reject = [&](VerifyIssue issue, std::string detail) {
    result.pass = false;
    result.reasons.push_back({issue, std::move(detail)});
  };

  for (int index : triplet.gold_recall.indices()) {
    if (FindTurn(q.history, index) == nullptr) {
      reject(VerifyIssue::kConsistency,
             "gold turn " + std::to_string(index) + " is not in the history");
    }
  }

  const ReasoningTrace trace = ParseTraceLenient(triplet.reasoning, grammar);
  const AlignmentResult alignment =
      PredictedRecallSet(trace, q.history, match_threshold);
  std::set<int> cited;
  for (const CitationAlignment& a : alignment.per_citation) {
    if (!a.resolved) {
      reject(VerifyIssue::kConsistency,
             "citation " + std::to_string(a.citation_ordinal + 1) +
                 " matches no history turn");
      continue;
    }
    cited.insert(*a.resolved);
    if (!triplet.gold_recall.Contains(*a.resolved)) {
      reject(VerifyIssue::kConsistency,
             "citation " + std::to_string(a.citation_ordinal + 1) +
                 " recalls turn " + std::to_string(*a.resolved) +
                 " outside the gold recall set");
    }
  }
  for (int index : triplet.gold_recall.indices()) {
    if (cited.count(index) == 0) {
      reject(VerifyIssue::kConsistency,
             "gold turn " + std::to_string(index) + " is never cited");
    }
  }

  std::string evidence;
  for (int index : triplet.gold_recall.indices()) {
    if (const Turn* turn = FindTurn(q.history, index)) {
      evidence += turn->text;
      evidence.push_back('\n');
    }
  }
  evidence += q.query;
  const std::vector<std::string> evidence_tokens = NormalizedTokens(evidence);
  const std::set<std::string> known(evidence_tokens.begin(), evidence_tokens.end());
  std::set<std::string> reported;
  for (const std::string& token : NormalizedTokens(triplet.answer)) {
    const bool checked = HasDigit(token) || DecodeUtf8(token).size() >= 4;
    if (checked && known.count(token) == 0 && reported.insert(token).second) {
      reject(VerifyIssue::kHallucination,
             "answer token '" + token + "' does not occur in the evidence");
    }
  }
  return result;
}

std::string_view SftModeName(SftMode mode) {
  return mode == SftMode::kPruned ? "pruned" : "full";
}

SftMode ParseSftMode(std::string_view name) {
  if (name == "pruned") return SftMode::kPruned;
  if (name == "full") return SftMode::kFull;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown SFT mode '" + std::string(name) + "'");
}

const std::string_view kSftSystemLine =
    "You are a dialogue assistant. Before answering, quote every earlier turn "
    "you need verbatim inside <HIS></HIS> tags, reason over the quotes, then "
    "give the final answer after \"Answer:\".";

SftInstance BuildSftInstance(const QueryContext& q, std::span<const Turn> context,
                             const AnnotationTriplet& triplet, SftMode mode) {
  SftInstance out;
  out.mode = mode;
  out.prompt = std::string(kSftSystemLine);
  for (const Turn& turn : context) {
    out.prompt += "\nTurn " + std::to_string(turn.index) + " (" +
                  std::string(SpeakerName(turn.speaker)) + "): " + OneLine(turn.text);
  }
  out.prompt +=
      "\nCurrent query (turn " + std::to_string(q.t) + "): " + OneLine(q.query);
  out.target = triplet.reasoning + "\nAnswer: " + triplet.answer;
  return out;
}

}  // namespace srt
