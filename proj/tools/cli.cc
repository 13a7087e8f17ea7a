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


#include "cli.h"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "srt/align.h"
#include "srt/curation.h"
#include "srt/embedding.h"
#include "srt/error.h"
#include "srt/eval.h"
#include "srt/gateway.h"
#include "srt/grpo.h"
#include "srt/parallel.h"
#include "srt/records.h"
#include "srt/reward.h"
#include "srt/text.h"
#include "srt/trace.h"

namespace srt::cli {
namespace {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

using FieldRef = std::variant<int RunConfig::*, double RunConfig::*, bool RunConfig::*,
                              std::string RunConfig::*>;

const std::vector<std::pair<std::string, FieldRef>>& Fields() {
  static const std::vector<std::pair<std::string, FieldRef>> kFields = {
      {"min_turns", &RunConfig::min_turns},
      {"max_turns", &RunConfig::max_turns},
      {"threshold", &RunConfig::threshold},
      {"lambda", &RunConfig::lambda},
      {"w_sem", &RunConfig::w_sem},
      {"w_dist", &RunConfig::w_dist},
      {"near_duplicates", &RunConfig::near_duplicates},
      {"near_fraction", &RunConfig::near_fraction},
      {"match_threshold", &RunConfig::match_threshold},
      {"substitution_threshold", &RunConfig::substitution_threshold},
      {"bad_case_f1", &RunConfig::bad_case_f1},
      {"eps_adv", &RunConfig::eps_adv},
      {"eps_clip", &RunConfig::eps_clip},
      {"beta", &RunConfig::beta},
      {"weight_format", &RunConfig::weight_format},
      {"weight_recall", &RunConfig::weight_recall},
      {"weight_answer", &RunConfig::weight_answer},
      {"embedder", &RunConfig::embedder},
      {"embed_dim", &RunConfig::embed_dim},
      {"embed_model", &RunConfig::embed_model},
      {"answer_delimiter", &RunConfig::answer_delimiter},
      {"jobs", &RunConfig::jobs},
      {"concurrency", &RunConfig::concurrency},
      {"retries", &RunConfig::retries},
      {"model", &RunConfig::model},
      {"temperature", &RunConfig::temperature},
      {"max_tokens", &RunConfig::max_tokens},
      {"timeout_ms", &RunConfig::timeout_ms},
      {"seed", &RunConfig::seed},
  };
  return kFields;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kInvalidArgument,
              "invalid value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
  if (result.ec != std::errc() || result.ptr != value.data() + value.size()) {
    BadValue(key, value);
  }
  return out;
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

// ---------------------------------------------------------------------------
// Files and diagnostics
// ---------------------------------------------------------------------------

// A missing or unwritable file; reported with its path and exit code 1.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Line {
  std::size_t number = 0;
  std::string text;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Line> ReadJsonl(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::vector<Line> lines;
  std::string text;
  for (std::size_t number = 1; std::getline(in, text); ++number) {
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (TrimAscii(text).empty()) continue;
    lines.push_back({number, std::move(text)});
  }
  return lines;
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open output file: " + path);
  out << content;
  if (!out.flush()) throw FileError("failed writing output file: " + path);
}

void WriteJsonl(const std::string& path, const std::vector<std::string>& records) {
  std::string content;
  for (const std::string& r : records) content += r + "\n";
  WriteFile(path, content);
}

class Diagnostics {
 public:
  Diagnostics(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}

  void DataError(const std::string& where, const std::string& message) {
    ++errors_;
    err_ << where << ": " << message << "\n";
  }
  void Note(const std::string& message) {
    if (!quiet_) err_ << message << "\n";
  }
  void Summary(const std::string& message) { err_ << message << "\n"; }

  int errors() const { return errors_; }
  int ExitCode() {
    if (errors_ == 0) return kExitOk;
    err_ << errors_ << " data error" << (errors_ == 1 ? "" : "s") << "\n";
    return kExitDataError;
  }

 private:
  std::ostream& err_;
  bool quiet_;
  int errors_ = 0;
};

std::string Where(const std::string& path, const Line& line) {
  return path + ":" + std::to_string(line.number);
}

// Decodes every line, reporting and skipping the ones that fail.
template <typename Decode>
auto DecodeAll(const std::string& path, const std::vector<Line>& lines, Decode decode,
               Diagnostics& diag) {
  using T = decltype(decode(std::string_view()));
  std::vector<std::pair<const Line*, T>> out;
  for (const Line& line : lines) {
    try {
      out.emplace_back(&line, decode(line.text));
    } catch (const Error& e) {
      diag.DataError(Where(path, line), e.what());
    }
  }
  return out;
}

std::string Key(std::string_view dialogue_id, int t) {
  return std::string(dialogue_id) + '\x1f' + std::to_string(t);
}

class DialogueIndex {
 public:
  DialogueIndex(const std::string& path, Diagnostics& diag) {
    for (auto& [line, record] : DecodeAll(path, ReadJsonl(path), DecodeDialogue, diag)) {
      const std::string id = record.dialogue.id();
      if (!index_.emplace(id, dialogues_.size()).second) {
        diag.DataError(Where(path, *line), "duplicate dialogue id '" + id + "'");
        continue;
      }
      dialogues_.push_back(std::move(record.dialogue));
    }
  }

  const Dialogue* Find(const std::string& id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : &dialogues_[it->second];
  }

 private:
  std::vector<Dialogue> dialogues_;
  std::unordered_map<std::string, std::size_t> index_;
};

class AnnotationIndex {
 public:
  AnnotationIndex(const std::string& path, Diagnostics& diag) {
    for (auto& [line, record] : DecodeAll(path, ReadJsonl(path), DecodeAnnotation, diag)) {
      const std::string key = Key(record.dialogue_id, record.t);
      if (!index_.emplace(key, records_.size()).second) {
        diag.DataError(Where(path, *line), "duplicate annotation for dialogue '" +
                                               record.dialogue_id + "' turn " +
                                               std::to_string(record.t));
        continue;
      }
      records_.push_back(std::move(record));
    }
  }

  const AnnotationRecord* Find(std::string_view dialogue_id, int t) const {
    const auto it = index_.find(Key(dialogue_id, t));
    return it == index_.end() ? nullptr : &records_[it->second];
  }

 private:
  std::vector<AnnotationRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Builds the query context for (dialogue_id, t), or reports why it cannot.
std::optional<QueryContext> ContextFor(const DialogueIndex& dialogues,
                                       const std::string& dialogue_id, int t,
                                       const std::string& where, Diagnostics& diag) {
  const Dialogue* d = dialogues.Find(dialogue_id);
  if (d == nullptr) {
    diag.DataError(where, "unknown dialogue '" + dialogue_id + "'");
    return std::nullopt;
  }
  try {
    return QueryContext::FromDialogue(*d, t);
  } catch (const Error& e) {
    diag.DataError(where, e.what());
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Shared construction from the resolved config
// ---------------------------------------------------------------------------

DependencyScoreParams DependencyParams(const RunConfig& c) {
  return {c.w_sem, c.w_dist, c.lambda, c.threshold};
}

TraceGrammar Grammar(const RunConfig& c) {
  TraceGrammar grammar;
  grammar.answer_delimiter = c.answer_delimiter;
  return grammar;
}

EvalOptions EvalOpts(const RunConfig& c) { return {c.bad_case_f1, c.substitution_threshold}; }

std::unique_ptr<EmbeddingProvider> MakeEmbedder(const RunConfig& c) {
  if (c.embedder == "remote") {
    const HttpTransportOptions env = HttpTransportOptions::FromEnvironment();
    RemoteEmbedderOptions options;
    options.base_url = env.base_url;
    options.api_key = env.api_key;
    options.model = c.embed_model;
    options.dim = c.embed_dim;
    options.timeout = std::chrono::milliseconds(c.timeout_ms);
    return std::make_unique<RemoteEmbedder>(options);
  }
  return std::make_unique<NgramEmbedder>(c.embed_dim);
}

HttpChatTransport MakeTransport(const RunConfig& c) {
  HttpTransportOptions options = HttpTransportOptions::FromEnvironment();
  options.timeout = std::chrono::milliseconds(c.timeout_ms);
  return HttpChatTransport(options);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct Paths {
  std::string in, out, annotations, dialogues, traces, gold, pred, report, records,
      rejects, group, dataset, mode;
};

int RunCurate(const RunConfig& c, const Paths& p, Diagnostics& diag) {
  const std::vector<Line> lines = ReadJsonl(p.in);
  std::vector<Dialogue> dialogues;
  for (auto& [line, record] : DecodeAll(p.in, lines, DecodeDialogue, diag)) {
    dialogues.push_back(std::move(record.dialogue));
  }
  const DedupOptions dedup{c.near_duplicates, c.near_fraction};
  const std::vector<std::size_t> survivors = DedupSurvivors(dialogues, dedup);

  std::vector<const Dialogue*> in_range;
  for (std::size_t i : survivors) {
    if (FilterTurnCount(dialogues[i], c.min_turns, c.max_turns)) {
      in_range.push_back(&dialogues[i]);
    }
  }

  const auto embedder = MakeEmbedder(c);
  const DependencyScoreParams params = DependencyParams(c);
  std::vector<std::vector<int>> queries(in_range.size());
  ParallelFor(in_range.size(), c.jobs, [&](std::size_t i) {
    queries[i] = DependencyQueries(*in_range[i], params,
                                   EmbeddingTurnSimilarity(*in_range[i], *embedder));
  });

  std::vector<std::string> out;
  for (std::size_t i = 0; i < in_range.size(); ++i) {
    if (!queries[i].empty()) out.push_back(EncodeDialogue({*in_range[i], queries[i]}));
  }
  WriteJsonl(p.out, out);
  diag.Summary("curate: read " + std::to_string(dialogues.size()) + ", duplicates " +
               std::to_string(dialogues.size() - survivors.size()) +
               ", outside turn range " +
               std::to_string(survivors.size() - in_range.size()) +
               ", without dependency " + std::to_string(in_range.size() - out.size()) +
               ", written " + std::to_string(out.size()));
  return diag.ExitCode();
}

int RunAnnotate(const RunConfig& c, const Paths& p, Diagnostics& diag) {
  const std::vector<Line> lines = ReadJsonl(p.in);
  const DependencyScoreParams params = DependencyParams(c);
  std::unique_ptr<EmbeddingProvider> embedder;
  std::vector<QueryContext> items;
  for (auto& [line, record] : DecodeAll(p.in, lines, DecodeDialogue, diag)) {
    std::vector<int> turns = record.query_turns;
    if (turns.empty()) {
      if (!embedder) embedder = MakeEmbedder(c);
      turns = DependencyQueries(record.dialogue, params,
                                EmbeddingTurnSimilarity(record.dialogue, *embedder));
    }
    for (int t : turns) {
      try {
        items.push_back(QueryContext::FromDialogue(record.dialogue, t));
      } catch (const Error& e) {
        diag.DataError(Where(p.in, *line), e.what());
      }
    }
  }

  HttpChatTransport transport = MakeTransport(c);
  AnnotateOptions options;
  options.max_attempts = c.retries;
  options.model = c.model;
  options.temperature = c.temperature;
  options.max_tokens = c.max_tokens;
  options.grammar = Grammar(c);

  std::vector<std::optional<AnnotationTriplet>> results(items.size());
  std::vector<std::string> failures(items.size());
  ParallelFor(items.size(), c.concurrency, [&](std::size_t i) {
    try {
      results[i] = AnnotateTurn(items[i], transport, options);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  std::vector<std::string> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (results[i]) {
      out.push_back(EncodeAnnotation({items[i].dialogue_id, items[i].t, *results[i]}));
    } else {
      diag.DataError(items[i].dialogue_id + " turn " + std::to_string(items[i].t),
                     failures[i]);
    }
  }
  WriteJsonl(p.out, out);
  diag.Summary("annotate: requested " + std::to_string(items.size()) + ", annotated " +
               std::to_string(out.size()));
  return diag.ExitCode();
}

int RunVerify(const RunConfig& c, const Paths& p, Diagnostics& diag) {
  const DialogueIndex dialogues(p.dialogues, diag);
  const std::vector<Line> lines = ReadJsonl(p.annotations);
  auto records = DecodeAll(p.annotations, lines, DecodeAnnotation, diag);

  std::vector<std::optional<QueryContext>> contexts;
  for (const auto& [line, record] : records) {
    contexts.push_back(ContextFor(dialogues, record.dialogue_id, record.t,
                                  Where(p.annotations, *line), diag));
  }
  std::vector<VerifyResult> results(records.size());
  ParallelFor(records.size(), c.jobs, [&](std::size_t i) {
    if (contexts[i]) {
      results[i] = VerifyTriplet(records[i].second.triplet, *contexts[i],
                                 c.match_threshold, Grammar(c));
    }
  });

  std::vector<std::string> passed;
  std::vector<std::string> rejected;
  int consistency = 0;
  int hallucination = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!contexts[i]) continue;
    const AnnotationRecord& record = records[i].second;
    if (results[i].pass) {
      passed.push_back(EncodeAnnotation(record));
      continue;
    }
    nlohmann::ordered_json reject;
    reject["dialogue_id"] = record.dialogue_id;
    reject["t"] = record.t;
    reject["reasons"] = nlohmann::ordered_json::array();
    bool has_consistency = false;
    bool has_hallucination = false;
    for (const VerifyReason& reason : results[i].reasons) {
      const std::string issue(VerifyIssueName(reason.issue));
      reject["reasons"].push_back({{"issue", issue}, {"detail", reason.detail}});
      diag.Note(Where(p.annotations, *records[i].first) + ": " + issue + ": " +
                reason.detail);
      has_consistency |= reason.issue == VerifyIssue::kConsistency;
      has_hallucination |= reason.issue == VerifyIssue::kHallucination;
    }
    consistency += has_consistency;
    hallucination += has_hallucination;
    rejected.push_back(reject.dump());
  }
  WriteJsonl(p.out, passed);
  if (!p.rejects.empty()) WriteJsonl(p.rejects, rejected);
  diag.Summary("verify: checked " + std::to_string(passed.size() + rejected.size()) +
               ", passed " + std::to_string(passed.size()) + ", consistency failures " +
               std::to_string(consistency) + ", hallucination failures " +
               std::to_string(hallucination));
  return diag.ExitCode();
}

int RunSftBuild(const RunConfig& c, const Paths& p, Diagnostics& diag) {
  const SftMode mode = ParseSftMode(p.mode);
  const DialogueIndex dialogues(p.dialogues, diag);
  const std::vector<Line> lines = ReadJsonl(p.in);
  auto records = DecodeAll(p.in, lines, DecodeAnnotation, diag);

  std::vector<std::optional<QueryContext>> contexts;
  for (const auto& [line, record] : records) {
    contexts.push_back(
        ContextFor(dialogues, record.dialogue_id, record.t, Where(p.in, *line), diag));
  }
  const auto embedder = MakeEmbedder(c);
  const DependencyScoreParams params = DependencyParams(c);
  std::vector<std::optional<SftInstance>> instances(records.size());
  std::vector<std::string> failures(records.size());
  ParallelFor(records.size(), c.jobs, [&](std::size_t i) {
    if (!contexts[i]) return;
    const QueryContext& q = *contexts[i];
    const AnnotationTriplet& triplet = records[i].second.triplet;
    try {
      if (mode == SftMode::kPruned) {
        const std::vector<double> sims = QuerySimilarities(q, *embedder);
        const std::vector<Turn> pruned =
            PruneHistory(q, triplet.gold_recall, params, sims);
        instances[i] = BuildSftInstance(q, pruned, triplet, mode);
      } else {
        instances[i] = BuildSftInstance(q, q.history, triplet, mode);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kGoldOutOfRange) throw;
      failures[i] = e.what();
    }
  });

  std::vector<std::string> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (instances[i]) {
      out.push_back(EncodeSft(records[i].second.dialogue_id, records[i].second.t,
                              *instances[i]));
    } else if (!failures[i].empty()) {
      diag.DataError(Where(p.in, *records[i].first), failures[i]);
    }
  }
  WriteJsonl(p.out, out);
  diag.Summary("sft-build: mode " + std::string(SftModeName(mode)) + ", written " +
               std::to_string(out.size()));
  return diag.ExitCode();
}

int RunReward(const RunConfig& c, const Paths& p, Diagnostics& diag) {
  const DialogueIndex dialogues(p.dialogues, diag);
  const AnnotationIndex gold(p.gold, diag);
  const std::vector<Line> lines = ReadJsonl(p.traces);
  auto traces = DecodeAll(p.traces, lines, DecodeTrace, diag);

  std::vector<std::optional<QueryContext>> contexts;
  std::vector<const AnnotationRecord*> golds;
  for (const auto& [line, trace] : traces) {
    const AnnotationRecord* g = gold.Find(trace.dialogue_id, trace.t);
    if (g == nullptr) {
      diag.DataError(Where(p.traces, *line), "no gold annotation for dialogue '" +
                                                 trace.dialogue_id + "' turn " +
                                                 std::to_string(trace.t));
      contexts.emplace_back();
    } else {
      contexts.push_back(
          ContextFor(dialogues, trace.dialogue_id, trace.t, Where(p.traces, *line), diag));
    }
    golds.push_back(g);
  }

  const auto embedder = MakeEmbedder(c);
  RewardOptions options;
  options.match_threshold = c.match_threshold;
  options.weights = {c.weight_format, c.weight_recall, c.weight_answer};
  options.grammar = Grammar(c);
  std::vector<RewardBreakdown> rewards(traces.size());
  ParallelFor(traces.size(), c.jobs, [&](std::size_t i) {
    if (contexts[i]) {
      rewards[i] = CompositeReward(traces[i].second.raw, *contexts[i],
                                   golds[i]->triplet, *embedder, options);
    }
  });

  std::vector<std::string> out;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (contexts[i]) {
      out.push_back(EncodeReward(traces[i].second.dialogue_id, traces[i].second.t,
                                 rewards[i]));
    }
  }
  WriteJsonl(p.out, out);
  diag.Summary("reward: scored " + std::to_string(out.size()));
  return diag.ExitCode();
}

int RunGrpoCheck(const RunConfig& c, const Paths& p, std::ostream& out,
                 Diagnostics& diag) {
  GroupFile file;
  try {
    file = DecodeGroupFile(ReadFile(p.group), {c.eps_adv, c.eps_clip, c.beta});
  } catch (const Error& e) {
    diag.DataError(p.group, e.what());
    return diag.ExitCode();
  }
  std::vector<double> rewards;
  for (const RolloutMember& m : file.group.members) rewards.push_back(m.reward);
  nlohmann::ordered_json report;
  try {
    report["advantages"] = GroupAdvantages(rewards, file.params.eps_adv);
    report["objective"] = GrpoObjective(file.group, file.params);
  } catch (const Error& e) {
    diag.DataError(p.group, e.what());
    return diag.ExitCode();
  }
  report["params"] = {{"eps_adv", file.params.eps_adv},
                      {"eps_clip", file.params.eps_clip},
                      {"beta", file.params.beta}};
  out << report.dump(2) << "\n";
  return diag.ExitCode();
}

int RunEval(const RunConfig& c, const Paths& p, Diagnostics& diag) {
  const DialogueIndex dialogues(p.dialogues, diag);
  const AnnotationIndex gold(p.gold, diag);
  const std::vector<Line> lines = ReadJsonl(p.pred);
  auto preds = DecodeAll(p.pred, lines, DecodePrediction, diag);

  std::vector<std::optional<QueryContext>> contexts;
  std::vector<const AnnotationRecord*> golds;
  for (const auto& [line, pred] : preds) {
    const AnnotationRecord* g = gold.Find(pred.dialogue_id, pred.t);
    if (g == nullptr) {
      diag.DataError(Where(p.pred, *line), "no gold annotation for dialogue '" +
                                               pred.dialogue_id + "' turn " +
                                               std::to_string(pred.t));
      contexts.emplace_back();
    } else {
      contexts.push_back(
          ContextFor(dialogues, pred.dialogue_id, pred.t, Where(p.pred, *line), diag));
    }
    golds.push_back(g);
  }

  const TraceGrammar grammar = Grammar(c);
  const EvalOptions options = EvalOpts(c);
  std::vector<EvalRecord> scored(preds.size());
  ParallelFor(preds.size(), c.jobs, [&](std::size_t i) {
    if (!contexts[i]) return;
    const PredictionRecord& pred = preds[i].second;
    std::string answer = pred.answer;
    RecallSet predicted = pred.predicted_recall;
    if (pred.raw) {
      const ReasoningTrace trace = ParseTraceLenient(*pred.raw, grammar);
      answer = trace.has_answer ? trace.answer : *pred.raw;
      predicted =
          PredictedRecallSet(trace, contexts[i]->history, c.match_threshold).predicted;
    }
    scored[i] = ScoreItem(*contexts[i], answer, golds[i]->triplet.answer, predicted,
                          golds[i]->triplet.gold_recall, pred.latency_ms, options);
  });

  std::vector<EvalRecord> records;
  std::vector<std::string> encoded;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!contexts[i]) continue;
    records.push_back(scored[i]);
    encoded.push_back(EncodeEvalRecord(scored[i]));
  }
  WriteFile(p.report, EmitReport(records, options));
  if (!p.records.empty()) WriteJsonl(p.records, encoded);
  diag.Summary("eval: scored " + std::to_string(records.size()));
  return diag.ExitCode();
}

int RunSrtp(const RunConfig& c, const Paths& p, Diagnostics& diag) {
  StrategyConfig strategy;
  strategy.mode = ParseStrategyMode(p.mode);
  strategy.answer_delimiter = c.answer_delimiter;
  strategy.model = c.model;
  strategy.temperature = c.temperature;
  strategy.max_tokens = c.max_tokens;

  const std::vector<Line> lines = ReadJsonl(p.dataset);
  std::vector<EvalItem> items;
  for (auto& [line, item] : DecodeAll(p.dataset, lines, DecodeEvalItem, diag)) {
    items.push_back(std::move(item));
  }
  HttpChatTransport transport = MakeTransport(c);
  SrtpRunOptions options;
  options.concurrency = c.concurrency;
  options.match_threshold = c.match_threshold;
  options.eval = EvalOpts(c);
  const std::vector<EvalRecord> records = RunSrtpEval(items, strategy, transport, options);

  std::vector<std::string> encoded;
  for (const EvalRecord& r : records) {
    encoded.push_back(EncodeEvalRecord(r));
    if (r.failure) diag.DataError(r.dialogue_id + " turn " + std::to_string(r.t), *r.failure);
  }
  WriteFile(p.report, EmitReport(records, options.eval));
  if (!p.records.empty()) WriteJsonl(p.records, encoded);
  diag.Summary("srtp: mode " + std::string(StrategyModeName(strategy.mode)) + ", items " +
               std::to_string(records.size()) + ", transport failures " +
               std::to_string(diag.errors()));
  return diag.ExitCode();
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

const std::vector<std::string>& RunConfig::Keys() {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> keys;
    for (const auto& [name, field] : Fields()) keys.push_back(name);
    return keys;
  }();
  return kKeys;
}

void RunConfig::Set(std::string_view key, std::string_view value) {
  for (const auto& [name, field] : Fields()) {
    if (name != key) continue;
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(this->*member)>;
          if constexpr (std::is_same_v<T, std::string>) {
            std::string_view v = value;
            if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
              v = v.substr(1, v.size() - 2);
            }
            this->*member = std::string(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            if (value == "true" || value == "1") {
              this->*member = true;
            } else if (value == "false" || value == "0") {
              this->*member = false;
            } else {
              BadValue(key, value);
            }
          } else {
            this->*member = ParseNumber<T>(key, value);
          }
        },
        field);
    return;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
}

void RunConfig::Validate() const {
  Require(min_turns >= 1 && max_turns >= min_turns,
          "turn bounds need 1 <= min_turns <= max_turns");
  DependencyParams(*this).Validate();
  Require(near_fraction >= 0.0 && near_fraction <= 1.0, "near_fraction must be in [0, 1]");
  Require(match_threshold > 0.0 && match_threshold <= 1.0,
          "match_threshold must be in (0, 1]");
  Require(substitution_threshold >= 0.0 && substitution_threshold <= 1.0,
          "substitution_threshold must be in [0, 1]");
  Require(bad_case_f1 >= 0.0 && bad_case_f1 <= 1.0, "bad_case_f1 must be in [0, 1]");
  GrpoParams{eps_adv, eps_clip, beta}.Validate();
  Require(embedder == "ngram" || embedder == "remote", "embedder must be ngram or remote");
  Require(embed_dim >= 1, "embed_dim must be >= 1");
  Require(!answer_delimiter.empty(), "answer_delimiter must not be empty");
  Require(jobs >= 1 && concurrency >= 1, "jobs and concurrency must be >= 1");
  Require(retries >= 1, "retries must be >= 1");
  Require(temperature >= 0.0, "temperature must be >= 0");
  Require(max_tokens >= 1 && timeout_ms >= 1, "max_tokens and timeout_ms must be >= 1");
}

std::string RunConfig::Dump() const {
  std::string out;
  for (const auto& [name, field] : Fields()) {
    out += name + " = ";
    std::visit(
        [&](auto member) {
          const auto& v = this->*member;
          using T = std::remove_cvref_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) {
            out += v;
          } else if constexpr (std::is_same_v<T, bool>) {
            out += v ? "true" : "false";
          } else if constexpr (std::is_same_v<T, double>) {
            out += FormatDouble(v);
          } else {
            out += std::to_string(v);
          }
        },
        field);
    out += "\n";
  }
  return out;
}

void ApplyConfigText(RunConfig& config, std::string_view text, std::string_view origin) {
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = TrimAscii(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(number) + ": ";
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, where + "expected 'key = value'");
    }
    try {
      config.Set(TrimAscii(line.substr(0, eq)), TrimAscii(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidArgument, where + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-recall thinking toolkit: curation, rewards, GRPO math and evaluation",
               "srt"};
  app.require_subcommand(1);

  std::string config_path;
  bool quiet = false;
  std::vector<std::pair<std::string, std::string>> overrides;
  Paths paths;

  auto shared = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat `key = value` config file");
    sub->add_option_function<std::string>(
        "--seed", [&](const std::string& v) { overrides.emplace_back("seed", v); },
        "Seed for sampled tie-breaking (default 0; current operations are fully "
        "deterministic)");
    sub->add_flag("--quiet", quiet, "Suppress per-record notes");
    sub->add_option_function<std::string>(
        "--jobs", [&](const std::string& v) { overrides.emplace_back("jobs", v); },
        "Worker threads for local computation (default 1)");
  };
  // A flag that overrides one config key.
  auto tunable = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                     const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
        help + " [config: " + key + "]");
  };

  CLI::App* curate = app.add_subcommand("curate", "Dedup, filter and select dialogues");
  shared(curate);
  curate->add_option("--in", paths.in, "Dialogue JSONL")->required();
  curate->add_option("--out", paths.out, "Curated dialogue JSONL")->required();
  tunable(curate, "--min-turns", "min_turns", "Minimum turn count (default 8)");
  tunable(curate, "--max-turns", "max_turns", "Maximum turn count (default 32)");
  tunable(curate, "--threshold", "threshold", "Dependency score threshold (default 0.6)");
  tunable(curate, "--lambda", "lambda", "Distance decay rate (default 0.15)");

  CLI::App* annotate = app.add_subcommand(
      "annotate", "Annotate curated query turns with a teacher model (SRT_API_BASE)");
  shared(annotate);
  annotate->add_option("--in", paths.in, "Curated dialogue JSONL")->required();
  annotate->add_option("--out", paths.out, "Annotation JSONL")->required();
  tunable(annotate, "--model", "model", "Teacher model name");
  tunable(annotate, "--concurrency", "concurrency", "Requests in flight (default 4)");
  tunable(annotate, "--retries", "retries", "Attempts per turn (default 3)");

  CLI::App* verify = app.add_subcommand("verify", "Keep annotations that pass verification");
  shared(verify);
  verify->add_option("--annotations", paths.annotations, "Annotation JSONL")->required();
  verify->add_option("--dialogues", paths.dialogues, "Dialogue JSONL")->required();
  verify->add_option("--out", paths.out, "Verified annotation JSONL")->required();
  verify->add_option("--rejects", paths.rejects, "Optional JSONL of failures with reasons");
  tunable(verify, "--tau-match", "match_threshold", "Citation match threshold (default 0.3)");

  CLI::App* sft = app.add_subcommand("sft-build", "Render SFT instances");
  shared(sft);
  sft->add_option("--in", paths.in, "Verified annotation JSONL")->required();
  sft->add_option("--dialogues", paths.dialogues, "Dialogue JSONL")->required();
  sft->add_option("--mode", paths.mode, "Context mode")
      ->required()
      ->check(CLI::IsMember({"pruned", "full"}));
  sft->add_option("--out", paths.out, "SFT JSONL")->required();
  tunable(sft, "--threshold", "threshold", "Dependency score threshold (default 0.6)");
  tunable(sft, "--lambda", "lambda", "Distance decay rate (default 0.15)");

  CLI::App* reward = app.add_subcommand("reward", "Score traces with the composite reward");
  shared(reward);
  reward->add_option("--traces", paths.traces, "Trace JSONL")->required();
  reward->add_option("--gold", paths.gold, "Annotation JSONL")->required();
  reward->add_option("--dialogues", paths.dialogues, "Dialogue JSONL")->required();
  reward->add_option("--out", paths.out, "Reward JSONL")->required();
  tunable(reward, "--tau-match", "match_threshold", "Citation match threshold (default 0.3)");

  CLI::App* grpo = app.add_subcommand("grpo-check", "Print advantages and GRPO objective");
  shared(grpo);
  grpo->add_option("--group", paths.group, "Rollout group JSON")->required();

  CLI::App* eval = app.add_subcommand("eval", "Score predictions and write a report");
  shared(eval);
  eval->add_option("--pred", paths.pred, "Prediction JSONL")->required();
  eval->add_option("--gold", paths.gold, "Annotation JSONL")->required();
  eval->add_option("--dialogues", paths.dialogues, "Dialogue JSONL")->required();
  eval->add_option("--report", paths.report, "Report JSON")->required();
  eval->add_option("--records", paths.records, "Optional per-item JSONL");
  tunable(eval, "--tau-match", "match_threshold", "Citation match threshold (default 0.3)");
  tunable(eval, "--tau-sub", "substitution_threshold",
          "Wrong-recall substitution threshold (default 0.3)");
  tunable(eval, "--bad-case-f1", "bad_case_f1", "Bad-case F1 threshold (default 0.5)");

  CLI::App* srtp = app.add_subcommand(
      "srtp", "Evaluate a chat-completion service with a strategy (SRT_API_BASE)");
  shared(srtp);
  srtp->add_option("--dataset", paths.dataset, "Eval item JSONL")->required();
  srtp->add_option("--mode", paths.mode, "Strategy")
      ->required()
      ->check(CLI::IsMember({"plain", "srt-p"}));
  srtp->add_option("--report", paths.report, "Report JSON")->required();
  srtp->add_option("--records", paths.records, "Optional per-item JSONL");
  tunable(srtp, "--model", "model", "Model name");
  tunable(srtp, "--concurrency", "concurrency", "Requests in flight (default 4)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    const CLI::App* failing = &app;
    for (CLI::App* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kExitUsage;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) ApplyConfigText(config, ReadFile(config_path), config_path);
    for (const auto& [key, value] : overrides) config.Set(key, value);
    config.Validate();
  } catch (const FileError& e) {
    err << e.what() << "\n";
    return kExitDataError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  err << "# resolved config\n" << config.Dump();

  Diagnostics diag(err, quiet);
  try {
    if (curate->parsed()) return RunCurate(config, paths, diag);
    if (annotate->parsed()) return RunAnnotate(config, paths, diag);
    if (verify->parsed()) return RunVerify(config, paths, diag);
    if (sft->parsed()) return RunSftBuild(config, paths, diag);
    if (reward->parsed()) return RunReward(config, paths, diag);
    if (grpo->parsed()) return RunGrpoCheck(config, paths, out, diag);
    if (eval->parsed()) return RunEval(config, paths, diag);
    if (srtp->parsed()) return RunSrtp(config, paths, diag);
  } catch (const FileError& e) {
    err << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace srt::cli
