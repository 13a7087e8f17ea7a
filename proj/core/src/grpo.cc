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

#include "srt/grpo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "srt/error.h"

namespace srt {
namespace {

void CheckMember(const RolloutMember& m, std::size_t ordinal) {
  if (m.policy.size() != m.old.size() || m.policy.size() != m.reference.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "member " + std::to_string(ordinal) + " has policy/old/reference "
                "lengths " + std::to_string(m.policy.size()) + "/" +
                    std::to_string(m.old.size()) + "/" +
                    std::to_string(m.reference.size()));
  }
}

}  // namespace

TokenLogprobs::TokenLogprobs(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] > 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "log-probability at position " + std::to_string(i) +
                      " is not a finite value <= 0");
    }
  }
}

void GrpoParams::Validate() const {
  if (!(eps_adv > 0.0 && eps_clip > 0.0 && beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "eps_adv, eps_clip and beta must all be > 0");
  }
}

double SftNll(const TokenLogprobs& rationale, const TokenLogprobs& answer) {
  if (rationale.empty()) {
    throw Error(ErrorCode::kEmptyRationale, "rationale has no tokens");
  }
  const auto& r = rationale.values();
  const auto& a = answer.values();
  return -std::accumulate(r.begin(), r.end(), 0.0) -
         std::accumulate(a.begin(), a.end(), 0.0);
}

std::vector<double> GroupAdvantages(std::span<const double> rewards, double eps_adv) {
  if (rewards.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "advantages of an empty group");
  }
  const auto n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  const double denom = std::sqrt(sq / n) + eps_adv;
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back((r - mean) / denom);
  return out;
}

std::vector<double> ImportanceRatios(const TokenLogprobs& policy,
                                     const TokenLogprobs& old) {
  if (policy.size() != old.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "policy has " + std::to_string(policy.size()) +
                    " tokens, old policy " + std::to_string(old.size()));
  }
  std::vector<double> out(policy.size());
  for (std::size_t t = 0; t < policy.size(); ++t) {
    out[t] = std::exp(policy.values()[t] - old.values()[t]);
  }
  return out;
}

double KlToken(double policy_lp, double reference_lp) {
  const double delta = reference_lp - policy_lp;
  // Near zero, e^d - d - 1 cancels catastrophically; use the series instead.
  if (std::abs(delta) < 1e-4) {
    return delta * delta * (0.5 + delta * (1.0 / 6.0 + delta / 24.0));
  }
  return std::max(0.0, std::expm1(delta) - delta);
}

double ClippedSurrogate(double ratio, double advantage, double eps_clip) {
  const double clipped = std::clamp(ratio, 1.0 - eps_clip, 1.0 + eps_clip);
  return std::min(ratio * advantage, clipped * advantage);
}

double GrpoObjectiveWithAdvantages(const RolloutGroup& group,
                                   std::span<const double> advantages,
                                   const GrpoParams& params) {
  params.Validate();
  if (group.members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rollout group is empty");
  }
  if (advantages.size() != group.members.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one advantage per member is required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < group.members.size(); ++i) {
    const RolloutMember& m = group.members[i];
    CheckMember(m, i);
    if (m.policy.empty()) continue;
    const std::vector<double> ratios = ImportanceRatios(m.policy, m.old);
    double sum = 0.0;
    for (std::size_t t = 0; t < ratios.size(); ++t) {
      sum += ClippedSurrogate(ratios[t], advantages[i], params.eps_clip) -
             params.beta * KlToken(m.policy.values()[t], m.reference.values()[t]);
    }
    total += sum / static_cast<double>(ratios.size());
  }
  return total / static_cast<double>(group.members.size());
}

double GrpoObjective(const RolloutGroup& group, const GrpoParams& params) {
  params.Validate();
  if (group.members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rollout group is empty");
  }
  std::vector<double> rewards;
  rewards.reserve(group.members.size());
  for (const RolloutMember& m : group.members) rewards.push_back(m.reward);
  return GrpoObjectiveWithAdvantages(group, GroupAdvantages(rewards, params.eps_adv),
                                     params);
}

}  // namespace srt
