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

// Objective values for supervised warm-up and group-relative policy
// optimization, computed from per-token log-probabilities supplied by an
// external model. Nothing here differentiates or updates parameters.

#ifndef SRT_GRPO_H_
#define SRT_GRPO_H_

#include <span>
#include <vector>

namespace srt {

// Natural-log probabilities of generated tokens. Every value is finite and
// <= 0 (checked on construction, kInvalidArgument otherwise).
class TokenLogprobs {
 public:
  TokenLogprobs() = default;
  explicit TokenLogprobs(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

 private:
  std::vector<double> values_;
};

struct RolloutMember {
  double reward = 0.0;
  TokenLogprobs policy;
  TokenLogprobs old;
  TokenLogprobs reference;
};

struct RolloutGroup {
  std::vector<RolloutMember> members;
};

struct GrpoParams {
  double eps_adv = 1e-8;
  double eps_clip = 0.2;
  double beta = 0.04;

  void Validate() const;  // all strictly positive
};

// -sum(rationale) - sum(answer). kEmptyRationale if the rationale is empty.
double SftNll(const TokenLogprobs& rationale, const TokenLogprobs& answer);

// (R - mean) / (population std + eps_adv). Empty input is kInvalidArgument.
std::vector<double> GroupAdvantages(std::span<const double> rewards,
                                    double eps_adv = 1e-8);

// exp(policy - old) per token; kLengthMismatch on unequal lengths.
std::vector<double> ImportanceRatios(const TokenLogprobs& policy,
                                     const TokenLogprobs& old);

// Per-token KL estimate e^d - d - 1 with d = reference_lp - policy_lp.
double KlToken(double policy_lp, double reference_lp);

// min(r * A, clip(r, 1 - eps, 1 + eps) * A).
double ClippedSurrogate(double ratio, double advantage, double eps_clip);

// (1/G) sum_i (1/|o_i|) sum_t [ClippedSurrogate - beta * KlToken], with
// sequence advantages broadcast to every token of their member. Members with
// no tokens contribute 0.
double GrpoObjective(const RolloutGroup& group, const GrpoParams& params = {});

// Same objective with caller-supplied advantages (one per member).
double GrpoObjectiveWithAdvantages(const RolloutGroup& group,
                                   std::span<const double> advantages,
                                   const GrpoParams& params = {});

}  // namespace srt

#endif  // SRT_GRPO_H_
