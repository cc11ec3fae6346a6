// Copyright 2026 The Curate Authors.
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

// Numeric core of group relative policy optimization over one prompt's group
// of sampled responses:
//
//   A_i  = (r_i - mean(r)) / (std(r) + eps)            population std
//   J    = mean_i mean_t min(rho_it A_i, clip(rho_it, 1-e, 1+e) A_i)
//          - beta * mean_i mean_t k3(ref_it - policy_it)
//   loss = -J
//
// k3(d) = exp(d) - d - 1 is the non-negative per-token KL estimator.
// Minimizing the returned loss is gradient ascent on the surrogate.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "curate/records.hpp"
#include "curate/types.hpp"

namespace curate {

std::vector<double> GroupAdvantages(std::span<const double> rewards,
                                    double eps = 1e-8);

// min(ratio * advantage, clip(ratio, 1 - clip_eps, 1 + clip_eps) * advantage).
// Throws InvalidArgument for ratio <= 0.
double ClippedTerm(double ratio, double advantage, double clip_eps);

double KlK3(double delta);

// Per-token k3 with delta = logp_ref - logp_policy. Throws InvalidArgument on
// a length mismatch.
std::vector<double> KlTerm(std::span<const double> logp_policy,
                           std::span<const double> logp_ref);

// Per-response, per-token log-probabilities. `behavior` is the sampling
// policy; when absent the policy ratio is taken as 1 (on-policy step).
struct TokenLogProbs {
  std::vector<std::vector<double>> policy;
  std::vector<std::vector<double>> reference;
  std::optional<std::vector<std::vector<double>>> behavior;
};

// Computes advantages, ratios and KL terms for a group. Throws
// InvalidArgument when the shapes do not line up or a value is non-finite.
GrpoGroup MakeGroup(std::vector<double> rewards, const TokenLogProbs& logprobs,
                    double advantage_eps);

struct GrpoBreakdown {
  double loss = 0.0;
  double surrogate = 0.0;  // mean clipped term
  double kl = 0.0;         // mean k3 term
  double beta = 0.0;
  std::vector<double> advantages;
  std::vector<double> response_surrogate;
  std::vector<double> response_kl;
};

// Uses group.advantages if present (computing them from rewards otherwise),
// group.ratios, and group.kl_terms; beta = kl_coeff, e = clip_eps.
GrpoBreakdown GrpoObjective(const GrpoGroup& group, const RewardConfig& config);

// Fixture group record:
//   {"id"?, "rewards": [..], "logp_policy": [[..]..], "logp_ref": [[..]..],
//    "logp_behavior"?: [[..]..], "ratios"?: [[..]..]}
// Explicit "ratios" override the behavior log-probabilities.
GrpoGroup GroupFromJson(const Json& record, double advantage_eps);
Json BreakdownToJson(const GrpoBreakdown& breakdown);

}  // namespace curate
