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

#include "curate/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curate/error.hpp"

namespace curate {
namespace {

void RequireFinite(const std::vector<std::vector<double>>& rows,
                   const char* name) {
  for (const auto& row : rows) {
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " contains a non-finite value");
      }
    }
  }
}

std::vector<std::vector<double>> Matrix(const Json& record, const char* name) {
  const Json& v = RequireField(record, name);
  if (!v.is_array()) throw DataError(std::string("\"") + name + "\" must be an array");
  std::vector<std::vector<double>> out;
  for (const Json& row : v) {
    if (!row.is_array()) {
      throw DataError(std::string("\"") + name + "\" must be an array of arrays");
    }
    std::vector<double> r;
    for (const Json& x : row) {
      if (!x.is_number()) {
        throw DataError(std::string("\"") + name + "\" must hold numbers");
      }
      r.push_back(x.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

double Mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> GroupAdvantages(std::span<const double> rewards,
                                    double eps) {
  if (rewards.empty()) throw InvalidArgument("empty reward group");
  const double mean = Mean(rewards);
  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  const double stddev = std::sqrt(sq / static_cast<double>(rewards.size()));
  std::vector<double> out(rewards.size(), 0.0);
  if (stddev == 0.0) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    out[i] = (rewards[i] - mean) / (stddev + eps);
  }
  return out;
}

double ClippedTerm(double ratio, double advantage, double clip_eps) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw InvalidArgument("policy ratio must be finite and > 0, got " +
                          std::to_string(ratio));
  }
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clipped * advantage);
}

double KlK3(double delta) { return std::max(0.0, std::expm1(delta) - delta); }

std::vector<double> KlTerm(std::span<const double> logp_policy,
                           std::span<const double> logp_ref) {
  if (logp_policy.size() != logp_ref.size()) {
    throw InvalidArgument("policy/reference log-prob lengths differ (" +
                          std::to_string(logp_policy.size()) + " vs " +
                          std::to_string(logp_ref.size()) + ")");
  }
  std::vector<double> out(logp_policy.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = KlK3(logp_ref[t] - logp_policy[t]);
  }
  return out;
}

GrpoGroup MakeGroup(std::vector<double> rewards, const TokenLogProbs& logprobs,
                    double advantage_eps) {
  const std::size_t n = rewards.size();
  if (logprobs.policy.size() != n || logprobs.reference.size() != n) {
    throw InvalidArgument("log-prob lists must have one entry per response");
  }
  RequireFinite(logprobs.policy, "logp_policy");
  RequireFinite(logprobs.reference, "logp_ref");
  if (logprobs.behavior) {
    if (logprobs.behavior->size() != n) {
      throw InvalidArgument("logp_behavior must have one entry per response");
    }
    RequireFinite(*logprobs.behavior, "logp_behavior");
  }
  GrpoGroup g;
  g.advantages = GroupAdvantages(rewards, advantage_eps);
  g.rewards = std::move(rewards);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pol = logprobs.policy[i];
    if (pol.empty()) throw InvalidArgument("response " + std::to_string(i) + " has no tokens");
    g.kl_terms.push_back(KlTerm(pol, logprobs.reference[i]));
    std::vector<double> ratios(pol.size(), 1.0);
    if (logprobs.behavior) {
      const auto& old = (*logprobs.behavior)[i];
      if (old.size() != pol.size()) {
        throw InvalidArgument("policy/behavior log-prob lengths differ");
      }
      for (std::size_t t = 0; t < pol.size(); ++t) {
        ratios[t] = std::exp(pol[t] - old[t]);
      }
    }
    g.ratios.push_back(std::move(ratios));
  }
  return g;
}

GrpoBreakdown GrpoObjective(const GrpoGroup& group, const RewardConfig& config) {
  GrpoBreakdown out;
  out.beta = config.kl_coeff;
  out.advantages = group.advantages.empty()
                       ? GroupAdvantages(group.rewards, config.advantage_eps)
                       : group.advantages;
  const std::size_t n = out.advantages.size();
  if (group.ratios.size() != n || group.kl_terms.size() != n) {
    throw InvalidArgument("ratios and kl_terms need one row per response");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ratios = group.ratios[i];
    const auto& kl = group.kl_terms[i];
    if (ratios.empty() || ratios.size() != kl.size()) {
      throw InvalidArgument("response " + std::to_string(i) +
                            ": ratio and kl rows must be nonempty and aligned");
    }
    double s = 0.0;
    for (double rho : ratios) s += ClippedTerm(rho, out.advantages[i], config.clip_eps);
    out.response_surrogate.push_back(s / static_cast<double>(ratios.size()));
    out.response_kl.push_back(Mean(kl));
  }
  out.surrogate = Mean(out.response_surrogate);
  out.kl = Mean(out.response_kl);
  out.loss = -(out.surrogate - out.beta * out.kl);
  return out;
}

GrpoGroup GroupFromJson(const Json& record, double advantage_eps) {
  const Json& rj = RequireField(record, "rewards");
  if (!rj.is_array() || rj.empty()) throw DataError("\"rewards\" must be a nonempty array");
  std::vector<double> rewards;
  for (const Json& r : rj) {
    if (!r.is_number()) throw DataError("\"rewards\" must hold numbers");
    rewards.push_back(r.get<double>());
  }
  TokenLogProbs lp;
  lp.policy = Matrix(record, "logp_policy");
  lp.reference = Matrix(record, "logp_ref");
  if (record.contains("logp_behavior")) lp.behavior = Matrix(record, "logp_behavior");
  GrpoGroup g = MakeGroup(std::move(rewards), lp, advantage_eps);
  if (record.contains("ratios")) {
    auto ratios = Matrix(record, "ratios");
    if (ratios.size() != g.ratios.size()) {
      throw DataError("\"ratios\" must have one row per response");
    }
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      if (ratios[i].size() != g.ratios[i].size()) {
        throw DataError("\"ratios\" row " + std::to_string(i) +
                        " does not match the token count");
      }
    }
    g.ratios = std::move(ratios);
  }
  return g;
}

Json BreakdownToJson(const GrpoBreakdown& b) {
  Json j = Json::object();
  j["loss"] = b.loss;
  j["surrogate"] = b.surrogate;
  j["kl"] = b.kl;
  j["beta"] = b.beta;
  j["advantages"] = b.advantages;
  j["response_surrogate"] = b.response_surrogate;
  j["response_kl"] = b.response_kl;
  return j;
}

}  // namespace curate
