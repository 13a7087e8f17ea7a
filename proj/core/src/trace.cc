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

#include "srt/trace.h"

#include <algorithm>
#include <optional>
#include <regex>

#include "srt/error.h"
#include "srt/text.h"

namespace srt {
namespace {

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

struct TagToken {
  std::size_t pos;
  std::size_t len;
  bool open;
};

struct Region {
  std::size_t open_pos;
  std::size_t content_begin;
  std::size_t content_end;
  std::size_t close_end;
  bool top_level;
  bool has_nested;
};

struct Scan {
  std::vector<TagToken> tags;
  std::vector<Region> top_regions;  // matched top-level regions, by position
  std::vector<FormatViolation> structural;
  std::optional<std::size_t> delimiter_pos;
};

std::vector<TagToken> FindTags(std::string_view raw, const TraceGrammar& g) {
  std::vector<TagToken> tags;
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::size_t open = raw.find(g.open_tag, i);
    const std::size_t close = raw.find(g.close_tag, i);
    if (open == std::string_view::npos && close == std::string_view::npos) break;
    // On a tie the longer token wins, so a close tag that embeds the open tag
    // is never split.
    if (close != std::string_view::npos &&
        (open == std::string_view::npos || close < open ||
         (close == open && g.close_tag.size() >= g.open_tag.size()))) {
      tags.push_back({close, g.close_tag.size(), false});
      i = close + g.close_tag.size();
    } else {
      tags.push_back({open, g.open_tag.size(), true});
      i = open + g.open_tag.size();
    }
  }
  return tags;
}

bool IsLineInitial(std::string_view raw, std::size_t pos) {
  while (pos > 0) {
    const char c = raw[pos - 1];
    if (c == '\n') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
    --pos;
  }
  return true;
}

Scan ScanTrace(std::string_view raw, const TraceGrammar& g) {
  Scan scan;
  scan.tags = FindTags(raw, g);

  struct Open {
    TagToken tag;
    bool has_nested;
  };
  std::vector<Open> stack;
  for (const TagToken& tag : scan.tags) {
    if (tag.open) {
      if (!stack.empty()) {
        scan.structural.push_back(
            {ViolationCode::kNestedTag, {tag.pos, tag.pos + tag.len}});
        for (Open& o : stack) o.has_nested = true;
      }
      stack.push_back({tag, false});
      continue;
    }
    if (stack.empty()) {
      scan.structural.push_back(
          {ViolationCode::kUnopenedClose, {tag.pos, tag.pos + tag.len}});
      continue;
    }
    const Open o = stack.back();
    stack.pop_back();
    if (stack.empty()) {
      scan.top_regions.push_back({o.tag.pos, o.tag.pos + o.tag.len, tag.pos,
                                  tag.pos + tag.len, true, o.has_nested});
    }
  }
  for (const Open& o : stack) {
    scan.structural.push_back(
        {ViolationCode::kUnclosedTag, {o.tag.pos, o.tag.pos + o.tag.len}});
  }

  auto covered = [&](std::size_t pos) {
    return std::any_of(scan.top_regions.begin(), scan.top_regions.end(),
                       [&](const Region& r) {
                         return pos >= r.open_pos && pos < r.close_end;
                       });
  };
  std::optional<std::size_t> last_any;
  std::optional<std::size_t> last_line_initial;
  if (!g.answer_delimiter.empty()) {
    for (std::size_t pos = raw.find(g.answer_delimiter);
         pos != std::string_view::npos;
         pos = raw.find(g.answer_delimiter, pos + 1)) {
      if (covered(pos)) continue;
      last_any = pos;
      if (IsLineInitial(raw, pos)) last_line_initial = pos;
    }
  }
  scan.delimiter_pos = last_line_initial ? last_line_initial : last_any;
  return scan;
}

struct MarkerMatch {
  Marker marker;
  std::size_t end;  // one past the ':'
};

std::optional<MarkerMatch> MatchMarker(std::string_view text, std::size_t i) {
  if (i > 0 && !IsAsciiSpace(text[i - 1])) return std::nullopt;
  Marker marker;
  std::size_t j = i;
  if (i < text.size() && (text[i] == 'Q' || text[i] == 'A')) {
    marker.kind = text[i] == 'Q' ? Marker::Kind::kQuestion : Marker::Kind::kAnswer;
    j = i + 1;
  } else if (text.substr(i, 4) == "Turn") {
    marker.kind = Marker::Kind::kTurn;
    j = i + 4;
    const std::size_t spaces_begin = j;
    while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
    if (j == spaces_begin) return std::nullopt;
  } else {
    return std::nullopt;
  }
  const std::size_t digits_begin = j;
  while (j < text.size() && IsDigit(text[j]) && j - digits_begin < 9) ++j;
  if (j == digits_begin || j >= text.size() || text[j] != ':') {
    return std::nullopt;
  }
  marker.number = std::stoi(std::string(text.substr(digits_begin, j - digits_begin)));
  return MarkerMatch{marker, j + 1};
}

// Trims whitespace and one layer of matching quotes; returns the absolute
// span of what is kept.
std::pair<std::string, Span> CleanQuote(std::string_view raw, std::size_t begin,
                                        std::size_t end) {
  while (begin < end && IsAsciiSpace(raw[begin])) ++begin;
  while (end > begin && IsAsciiSpace(raw[end - 1])) --end;
  const Span span{begin, end};
  if (end - begin >= 2 && raw[begin] == raw[end - 1] &&
      (raw[begin] == '\'' || raw[begin] == '"')) {
    ++begin;
    --end;
    while (begin < end && IsAsciiSpace(raw[begin])) ++begin;
    while (end > begin && IsAsciiSpace(raw[end - 1])) --end;
  }
  return {std::string(raw.substr(begin, end - begin)), span};
}

struct RawCitation {
  Citation citation;
  Span marker_span;  // empty for marker-less citations
};

std::vector<RawCitation> SplitRegion(std::string_view raw, const Region& r) {
  const std::string_view content =
      raw.substr(r.content_begin, r.content_end - r.content_begin);
  std::vector<std::pair<std::size_t, MarkerMatch>> markers;
  for (std::size_t i = 0; i < content.size(); ++i) {
    if (auto m = MatchMarker(content, i)) {
      markers.emplace_back(i, *m);
      i = m->end - 1;
    }
  }

  std::vector<RawCitation> out;
  const std::size_t first_marker = markers.empty() ? content.size() : markers[0].first;
  {
    auto [text, span] =
        CleanQuote(raw, r.content_begin, r.content_begin + first_marker);
    if (!text.empty()) {
      out.push_back({Citation{std::nullopt, std::move(text), span}, {}});
    }
  }
  for (std::size_t k = 0; k < markers.size(); ++k) {
    const auto& [offset, match] = markers[k];
    const std::size_t quote_end =
        k + 1 < markers.size() ? markers[k + 1].first : content.size();
    auto [text, span] = CleanQuote(raw, r.content_begin + match.end,
                                   r.content_begin + quote_end);
    const Span marker_span{r.content_begin + offset, r.content_begin + match.end};
    const Span full{marker_span.begin, span.end > span.begin ? span.end
                                                             : marker_span.end};
    out.push_back({Citation{match.marker, std::move(text), full}, marker_span});
  }
  return out;
}

ReasoningTrace Assemble(std::string_view raw, const Scan& scan,
                        const TraceGrammar& g) {
  ReasoningTrace trace;
  trace.raw = std::string(raw);
  const std::size_t reasoning_end = scan.delimiter_pos.value_or(raw.size());

  std::size_t cursor = 0;
  auto push_reasoning = [&](std::size_t begin, std::size_t end) {
    const std::string_view text = TrimAscii(raw.substr(begin, end - begin));
    if (!text.empty()) {
      trace.segments.push_back({TraceSegment::Kind::kReasoning, std::string(text)});
    }
  };
  for (const Region& r : scan.top_regions) {
    if (r.close_end > reasoning_end) break;
    push_reasoning(cursor, r.open_pos);
    if (r.has_nested) {
      push_reasoning(r.open_pos, r.close_end);
    } else {
      trace.segments.push_back(
          {TraceSegment::Kind::kRecall,
           std::string(raw.substr(r.content_begin, r.content_end - r.content_begin))});
      for (RawCitation& c : SplitRegion(raw, r)) {
        if (!c.citation.quoted_text.empty()) {
          trace.citations.push_back(std::move(c.citation));
        }
      }
    }
    cursor = r.close_end;
  }
  push_reasoning(cursor, reasoning_end);

  if (scan.delimiter_pos) {
    trace.has_answer = true;
    trace.answer = std::string(
        TrimAscii(raw.substr(*scan.delimiter_pos + g.answer_delimiter.size())));
  }
  return trace;
}

[[noreturn]] void fail(const std::string& why) {
  throw Error(ErrorCode::kMalformedAnnotation, why);
}

}  // namespace

std::string_view ViolationCodeName(ViolationCode code) {
  switch (code) {
    case ViolationCode::kUnclosedTag: return "UNCLOSED_TAG";
    case ViolationCode::kUnopenedClose: return "UNOPENED_CLOSE";
    case ViolationCode::kNestedTag: return "NESTED_TAG";
    case ViolationCode::kEmptyCitation: return "EMPTY_CITATION";
    case ViolationCode::kTagInAnswer: return "TAG_IN_ANSWER";
  }
  return "UNKNOWN";
}

bool FormatVerdict::Has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const FormatViolation& v) { return v.code == code; });
}

FormatVerdict ValidateFormat(std::string_view raw, const TraceGrammar& grammar) {
  const Scan scan = ScanTrace(raw, grammar);
  FormatVerdict verdict;
  verdict.violations = scan.structural;

  for (const Region& r : scan.top_regions) {
    if (r.has_nested) continue;
    if (TrimAscii(raw.substr(r.content_begin, r.content_end - r.content_begin))
            .empty()) {
      verdict.violations.push_back(
          {ViolationCode::kEmptyCitation, {r.open_pos, r.close_end}});
      continue;
    }
    for (const RawCitation& c : SplitRegion(raw, r)) {
      if (c.citation.quoted_text.empty()) {
        verdict.violations.push_back({ViolationCode::kEmptyCitation, c.marker_span});
      }
    }
  }

  if (scan.delimiter_pos) {
    const std::size_t answer_begin =
        *scan.delimiter_pos + grammar.answer_delimiter.size();
    for (const TagToken& tag : scan.tags) {
      if (tag.pos >= answer_begin) {
        verdict.violations.push_back(
            {ViolationCode::kTagInAnswer, {tag.pos, tag.pos + tag.len}});
      }
    }
  }

  std::stable_sort(verdict.violations.begin(), verdict.violations.end(),
                   [](const FormatViolation& a, const FormatViolation& b) {
                     return a.span.begin < b.span.begin;
                   });
  verdict.valid = verdict.violations.empty();
  return verdict;
}

ReasoningTrace ParseTrace(std::string_view raw, const TraceGrammar& grammar) {
  const FormatVerdict verdict = ValidateFormat(raw, grammar);
  if (!verdict.valid) {
    const FormatViolation& first = verdict.violations.front();
    throw Error(ErrorCode::kPreconditionViolated,
                "trace is not well-formed: " +
                    std::string(ViolationCodeName(first.code)) + " at offset " +
                    std::to_string(first.span.begin));
  }
  return Assemble(raw, ScanTrace(raw, grammar), grammar);
}

ReasoningTrace ParseTraceLenient(std::string_view raw,
                                 const TraceGrammar& grammar) {
  return Assemble(raw, ScanTrace(raw, grammar), grammar);
}

std::string RenderTrace(const ReasoningTrace& trace, const TraceGrammar& grammar) {
  std::string out;
  for (const TraceSegment& segment : trace.segments) {
    if (!out.empty()) out.push_back(' ');
    if (segment.kind == TraceSegment::Kind::kRecall) {
      out += grammar.open_tag + segment.text + grammar.close_tag;
    } else {
      out += segment.text;
    }
  }
  if (trace.has_answer) {
    out += "\n" + grammar.answer_delimiter + " " + trace.answer;
  }
  return out;
}

AnnotationTriplet ParseTeacherAnnotation(std::string_view raw,
                                         const TraceGrammar& grammar) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= raw.size();) {
    std::size_t end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }

  static constexpr std::string_view kHeaders[] = {"RECALL:", "REASONING:",
                                                  "ANSWER:"};
  // sections[k] collects the lines of header k; -1 before the first header.
  std::vector<std::string> sections[3];
  bool seen[3] = {false, false, false};
  int current = -1;
  for (std::string_view line : lines) {
    const std::string_view trimmed = TrimAscii(line);
    int header = -1;
    for (int k = 0; k < 3; ++k) {
      if (trimmed.substr(0, kHeaders[k].size()) == kHeaders[k]) header = k;
    }
    if (header >= 0) {
      if (seen[header]) fail("duplicate section header: " + std::string(trimmed));
      if (header != current + 1) {
        fail("section out of order: " + std::string(trimmed));
      }
      seen[header] = true;
      current = header;
      const std::string_view rest =
          TrimAscii(trimmed.substr(kHeaders[header].size()));
      if (!rest.empty()) sections[header].emplace_back(rest);
      continue;
    }
    if (current < 0) {
      if (!trimmed.empty()) fail("text before RECALL: section: " + std::string(trimmed));
      continue;
    }
    sections[current].emplace_back(line);
  }
  for (int k = 0; k < 3; ++k) {
    if (!seen[k]) fail("missing section " + std::string(kHeaders[k]));
  }

  AnnotationTriplet triplet;
  static const std::regex kRecallLine(
      R"re(^Turn\s+([0-9]{1,9})\s*:\s*(?:'(.*)'|"(.*)")$)re");
  std::vector<std::string_view> recall_lines;
  for (const std::string& line : sections[0]) {
    const std::string_view trimmed = TrimAscii(line);
    if (!trimmed.empty()) recall_lines.push_back(trimmed);
  }
  const bool explicit_none =
      recall_lines.size() == 1 &&
      NormalizeText(recall_lines.front()) == "none";
  if (!explicit_none) {
    for (std::string_view line : recall_lines) {
      std::match_results<std::string_view::const_iterator> m;
      if (!std::regex_match(line.begin(), line.end(), m, kRecallLine)) {
        fail("bad recall line: " + std::string(line));
      }
      const int index = std::stoi(m[1].str());
      if (index < 1) fail("bad recall line: " + std::string(line));
      const std::string content = m[2].matched ? m[2].str() : m[3].str();
      triplet.gold_recall.Insert(index);
      triplet.recall_lines.emplace_back(index, content);
    }
  }

  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) out.push_back('\n');
      out += parts[i];
    }
    return std::string(TrimAscii(out));
  };
  triplet.reasoning = join(sections[1]);
  triplet.answer = join(sections[2]);
  if (triplet.reasoning.empty()) fail("empty REASONING: section");
  if (triplet.answer.empty()) fail("empty ANSWER: section");

  const FormatVerdict verdict = ValidateFormat(triplet.reasoning, grammar);
  if (!verdict.valid) {
    const FormatViolation& v = verdict.violations.front();
    fail("reasoning is not well-formed (" + std::string(ViolationCodeName(v.code)) +
         "): " + triplet.reasoning.substr(v.span.begin, v.span.end - v.span.begin));
  }
  return triplet;
}

}  // namespace srt
