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

#include "curate/types.hpp"

#include <cmath>

namespace curate {
namespace {

constexpr std::array<std::pair<TaskKind, std::string_view>, 5> kTaskNames = {{
    {TaskKind::kSelection, "selection"},
    {TaskKind::kMatching, "matching"},
    {TaskKind::kPoint, "point"},
    {TaskKind::kBox, "box"},
    {TaskKind::kOpenDescription, "open_description"},
}};

bool InOpenUnit(double v) { return v > 0.0 && v < 1.0; }

void CheckMixture(const TierMixture& mixture, const std::string& field,
                  std::vector<ConfigViolation>* out) {
  double sum = 0.0;
  for (const auto& [tier, fraction] : mixture) {
    if (!(fraction >= 0.0) || !std::isfinite(fraction)) {
      out->push_back({field, "fractions >= 0"});
      return;
    }
    sum += fraction;
  }
  if (mixture.empty() || std::abs(sum - 1.0) > 1e-9) {
    out->push_back({field, "fractions sum to 1"});
  }
}

}  // namespace

std::string_view ToString(TaskKind kind) {
  for (const auto& [k, name] : kTaskNames) {
    if (k == kind) return name;
  }
  return "selection";
}

std::optional<TaskKind> ParseTaskKind(std::string_view text) {
  for (const auto& [k, name] : kTaskNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::string_view ToString(Tier tier) {
  switch (tier) {
    case Tier::kT1: return "T1";
    case Tier::kT2: return "T2";
    case Tier::kT3: return "T3";
    case Tier::kT4: return "T4";
  }
  return "T1";
}

std::optional<Tier> ParseTier(std::string_view text) {
  for (Tier t : kAllTiers) {
    if (ToString(t) == text) return t;
  }
  return std::nullopt;
}

std::string_view ToString(Stage stage) {
  switch (stage) {
    case Stage::kS1: return "S1";
    case Stage::kS2: return "S2";
    case Stage::kS3: return "S3";
    case Stage::kS4: return "S4";
  }
  return "S1";
}

std::optional<Stage> ParseStage(std::string_view text) {
  for (Stage s : {Stage::kS1, Stage::kS2, Stage::kS3, Stage::kS4}) {
    if (ToString(s) == text) return s;
  }
  return std::nullopt;
}

std::vector<ConfigViolation> ValidateConfigs(const EntropyConfig& entropy,
                                             const TaxonomyConfig& taxonomy,
                                             const FilterConfig& filter,
                                             const RewardConfig& reward) {
  std::vector<ConfigViolation> out;

  if (!(entropy.alpha >= 0.0 && entropy.alpha <= 1.0)) {
    out.push_back({"alpha", "0 <= alpha <= 1"});
  }
  if (entropy.block_size < 1) {
    out.push_back({"block_size", "block_size >= 1"});
  }
  if (!(entropy.sigma_min_sq < entropy.sigma_max_sq)) {
    out.push_back({"sigma_min_sq", "sigma_min_sq < sigma_max_sq"});
  }
  static constexpr std::array<const char*, 3> kAxes = {"x", "y", "z"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (entropy.grid_dims[i] < 1) {
      out.push_back({"grid_dims", std::string("n") + kAxes[i] + " >= 1"});
    }
    const auto& [lo, hi] = entropy.grid_bounds[i];
    if (!(lo < hi)) {
      out.push_back({"grid_bounds", std::string(kAxes[i]) + "_lo < " +
                                        kAxes[i] + "_hi"});
    }
  }

  if (!(taxonomy.theta1 > 0.0)) out.push_back({"theta1", "0 < theta1"});
  if (!(taxonomy.theta1 < taxonomy.theta2)) {
    out.push_back({"theta2", "theta1 < theta2"});
  }
  if (!(taxonomy.theta2 < taxonomy.theta3)) {
    out.push_back({"theta3", "theta2 < theta3"});
  }
  if (!(taxonomy.theta3 < 1.0)) out.push_back({"theta3", "theta3 < 1"});

  if (!InOpenUnit(filter.tau)) out.push_back({"tau", "0 < tau < 1"});
  if (!InOpenUnit(filter.phi)) out.push_back({"phi", "0 < phi < 1"});

  if (std::abs(reward.lambda_format + reward.lambda_correct - 1.0) > 1e-12) {
    out.push_back({"lambda_correct", "lambda_format + lambda_correct = 1"});
  }
  if (!InOpenUnit(reward.clip_eps)) {
    out.push_back({"clip_eps", "0 < clip_eps < 1"});
  }
  if (!(reward.point_radius_px > 0.0)) {
    out.push_back({"point_radius_px", "point_radius_px > 0"});
  }
  if (!(reward.kl_coeff >= 0.0)) out.push_back({"kl_coeff", "kl_coeff >= 0"});
  if (reward.group_size < 1) {
    out.push_back({"group_size", "group_size >= 1"});
  }
  if (!(reward.advantage_eps >= 0.0)) {
    out.push_back({"advantage_eps", "advantage_eps >= 0"});
  }
  return out;
}

std::vector<ConfigViolation> ValidateCurriculum(const CurriculumConfig& config) {
  std::vector<ConfigViolation> out;
  CheckMixture(config.s1, "s1_mixture", &out);
  CheckMixture(config.s2, "s2_mixture", &out);
  CheckMixture(config.s3_start, "s3_start_mixture", &out);
  CheckMixture(config.s3_end, "s3_end_mixture", &out);
  return out;
}

std::vector<ConfigViolation> ValidateRetry(const RetryPolicy& policy) {
  std::vector<ConfigViolation> out;
  if (policy.max_attempts < 1) {
    out.push_back({"retry_attempts", "retry_attempts >= 1"});
  }
  if (!(policy.base_delay_ms >= 0.0)) {
    out.push_back({"retry_base_ms", "retry_base_ms >= 0"});
  }
  if (!(policy.jitter >= 0.0 && policy.jitter < 1.0)) {
    out.push_back({"retry_jitter", "0 <= retry_jitter < 1"});
  }
  return out;
}

}  // namespace curate
