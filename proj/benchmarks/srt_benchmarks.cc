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


#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "srt/align.h"
#include "srt/curation.h"
#include "srt/embedding.h"
#include "srt/grpo.h"
#include "srt/reward.h"
#include "srt/text.h"
#include "srt/trace.h"

namespace srt {
namespace {

std::vector<std::string> Utterances(std::size_t n, unsigned seed) {
  static const char* kWords[] = {"order", "Membership", "tier", "discount", "Uptown", "branch",
                                 "costs", "$180", "hot", "stone", "session", "Lena", "the",
                                 "an", "deep", "tissue", "café", "über", "ticket", "9421"};
  std::mt19937 rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    const int len = 6 + static_cast<int>(rng() % 14);
    for (int w = 0; w < len; ++w) s += std::string(w ? " " : "") + kWords[rng() % 20];
    out.push_back(s + (rng() % 2 ? "." : "?"));
  }
  return out;
}

Dialogue MakeDialogue(int turns, unsigned seed) {
  std::vector<Turn> t;
  const std::vector<std::string> texts = Utterances(static_cast<std::size_t>(turns), seed);
  for (int i = 0; i < turns; ++i) {
    t.push_back({i + 1, i % 2 == 0 ? Speaker::kUser : Speaker::kAssistant, texts[i]});
  }
  return Dialogue("bench" + std::to_string(seed), t);
}

std::string MakeTrace(const QueryContext& q) {
  std::string trace = "First I look back.";
  for (std::size_t i = 0; i < q.history.size(); i += 4) {
    trace += " <HIS>Turn " + std::to_string(q.history[i].index) + ": " + q.history[i].text +
             "</HIS> which matters.";
  }
  return trace + "\nAnswer: the discount applies";
}

void BM_NormalizeText(benchmark::State& state) {
  const std::vector<std::string> texts = Utterances(256, 1);
  std::size_t bytes = 0;
  for (const auto& t : texts) bytes += t.size();
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(NormalizeText(t));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_NormalizeText);

void BM_ParseAndAlign(benchmark::State& state) {
  const Dialogue d = MakeDialogue(static_cast<int>(state.range(0)), 2);
  const QueryContext q = QueryContext::FromDialogue(d, static_cast<int>(d.size()));
  const std::string trace = MakeTrace(q);
  for (auto _ : state) {
    const ReasoningTrace parsed = ParseTrace(trace);
    benchmark::DoNotOptimize(PredictedRecallSet(parsed, q.history));
  }
}
BENCHMARK(BM_ParseAndAlign)->Arg(8)->Arg(32);

void BM_CompositeReward(benchmark::State& state) {
  const Dialogue d = MakeDialogue(static_cast<int>(state.range(0)), 3);
  const QueryContext q = QueryContext::FromDialogue(d, static_cast<int>(d.size()));
  const std::string trace = MakeTrace(q);
  AnnotationTriplet gold;
  gold.gold_recall = {1, 5};
  gold.answer = "the discount applies at every branch";
  const NgramEmbedder embedder;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CompositeReward(trace, q, gold, embedder));
  }
}
BENCHMARK(BM_CompositeReward)->Arg(8)->Arg(32);

void BM_GrpoObjective(benchmark::State& state) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> lp(-5.0, -0.01);
  RolloutGroup group;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> p, o, r;
    for (int t = 0; t < state.range(0); ++t) {
      p.push_back(lp(rng));
      o.push_back(lp(rng));
      r.push_back(lp(rng));
    }
    group.members.push_back({static_cast<double>(i % 3), TokenLogprobs(p), TokenLogprobs(o),
                             TokenLogprobs(r)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(GrpoObjective(group));
  state.SetItemsProcessed(state.iterations() * 8 * state.range(0));
}
BENCHMARK(BM_GrpoObjective)->Arg(128)->Arg(1024);

void BM_Dedup(benchmark::State& state) {
  std::vector<Dialogue> corpus;
  for (int i = 0; i < state.range(0); ++i) {
    corpus.push_back(MakeDialogue(8 + i % 25, static_cast<unsigned>(i % (state.range(0) * 4 / 5))));
  }
  for (auto _ : state) benchmark::DoNotOptimize(DedupSurvivors(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dedup)->Arg(1000);

void BM_SelectDialogue(benchmark::State& state) {
  const Dialogue d = MakeDialogue(static_cast<int>(state.range(0)), 5);
  const NgramEmbedder embedder;
  for (auto _ : state) {
    const TurnSimilarity sim = EmbeddingTurnSimilarity(d, embedder);
    benchmark::DoNotOptimize(SelectDialogue(d, {}, sim));
  }
}
BENCHMARK(BM_SelectDialogue)->Arg(8)->Arg(32);

}  // namespace
}  // namespace srt

BENCHMARK_MAIN();
