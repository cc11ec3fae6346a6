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

// Domain types shared by every pipeline stage. All of them are plain values:
// once constructed they are never mutated in place by the library, so they can
// be copied freely between worker threads.

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace curate {

enum class TaskKind { kSelection, kMatching, kPoint, kBox, kOpenDescription };

std::string_view ToString(TaskKind kind);
std::optional<TaskKind> ParseTaskKind(std::string_view text);

// Difficulty tiers, totally ordered T1 < T2 < T3 < T4.
enum class Tier { kT1 = 1, kT2 = 2, kT3 = 3, kT4 = 4 };

inline constexpr std::array<Tier, 4> kAllTiers = {Tier::kT1, Tier::kT2,
                                                  Tier::kT3, Tier::kT4};

std::string_view ToString(Tier tier);
std::optional<Tier> ParseTier(std::string_view text);

enum class Stage { kS1 = 1, kS2 = 2, kS3 = 3, kS4 = 4 };

std::string_view ToString(Stage stage);
std::optional<Stage> ParseStage(std::string_view text);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

struct Object3D {
  Vec3 center;
  std::optional<std::string> category;
  bool occluded = false;
  bool background = false;

  bool operator==(const Object3D&) const = default;
};

// Where a sample's raw depth payload lives and how to interpret it.
struct DepthRef {
  std::string path;
  int width = 0;
  int height = 0;

  bool operator==(const DepthRef&) const = default;
};

// Row-major depth in meters. Finite values > 0 are valid pixels.
struct DepthMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<float> values;

  float at(std::size_t row, std::size_t col) const {
    return values[row * width + col];
  }
  bool operator==(const DepthMap&) const = default;
};

struct VqaSample {
  std::string id;
  std::string dataset_name;
  std::vector<std::string> image_refs;
  std::string question;
  std::string answer;
  TaskKind task_kind = TaskKind::kSelection;
  std::set<std::string> semantic_tags;  // lowercase
  std::optional<DepthRef> depth_ref;
  std::optional<std::vector<Object3D>> objects;

  bool operator==(const VqaSample&) const = default;
};

using AxisBounds = std::pair<double, double>;

struct EntropyConfig {
  double alpha = 0.6;
  int block_size = 8;
  double sigma_min_sq = 0.01;  // m^2
  double sigma_max_sq = 25.0;  // m^2
  std::array<int, 3> grid_dims = {8, 8, 4};
  std::array<AxisBounds, 3> grid_bounds = {
      AxisBounds{-40.0, 40.0}, AxisBounds{-40.0, 40.0}, AxisBounds{-3.0, 5.0}};

  bool operator==(const EntropyConfig&) const = default;
};

struct EntropyReport {
  double h_depth = 0.0;
  double h_3d = 0.0;
  double h_total = 0.0;
  std::size_t valid_blocks = 0;
  std::size_t object_count = 0;

  bool operator==(const EntropyReport&) const = default;
};

struct TaxonomyConfig {
  double theta1 = 0.3;
  double theta2 = 0.5;
  double theta3 = 0.7;
  std::set<std::string> promote_t3_tags = {"multi-view", "cross-view"};
  std::set<std::string> promote_t4_tags = {"temporal", "temporal prediction",
                                           "prediction"};

  bool operator==(const TaxonomyConfig&) const = default;
};

struct FilterConfig {
  double tau = 0.2;
  double phi = 0.85;

  bool operator==(const FilterConfig&) const = default;
};

struct QualityAssessment {
  double correctness = 0.0;
  double completeness = 0.0;
  double clarity = 0.0;
  double relevance = 0.0;
  double mean_score = 0.0;
  bool clamped = false;  // service returned an out-of-range score
  std::string rationale;

  bool operator==(const QualityAssessment&) const = default;
};

struct RewardConfig {
  double lambda_format = 0.2;
  double lambda_correct = 0.8;
  // Used for point tasks whose ground truth carries no box.
  double point_radius_px = 50.0;
  double kl_coeff = 0.05;
  double clip_eps = 0.2;
  int group_size = 4;
  double advantage_eps = 1e-8;

  bool operator==(const RewardConfig&) const = default;
};

struct RewardBreakdown {
  double r_format = 0.0;
  double r_correct = 0.0;
  double r_total = 0.0;
  TaskKind verifier = TaskKind::kSelection;
  bool flagged = false;  // a verifier hit non-finite or malformed input

  bool operator==(const RewardBreakdown&) const = default;
};

struct GrpoGroup {
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<std::vector<double>> ratios;    // per response, per token
  std::vector<std::vector<double>> kl_terms;  // per response, per token

  bool operator==(const GrpoGroup&) const = default;
};

struct FusionDims {
  std::size_t n_queries = 0;
  std::size_t n_kv = 0;
  std::size_t d_model = 0;
  std::size_t n_heads = 1;

  // max(1, d_model / 128): one head per 128 feature channels.
  static std::size_t HeadsFor(std::size_t d_model) {
    return d_model / 128 > 0 ? d_model / 128 : 1;
  }
  static FusionDims For(std::size_t n_queries, std::size_t n_kv,
                        std::size_t d_model) {
    return {n_queries, n_kv, d_model, HeadsFor(d_model)};
  }
};

using TierMixture = std::map<Tier, double>;

// Per-stage data mixtures. The stage 3 mixture ramps from `s3_start` at
// progress 0 to `s3_end` at progress 1.
struct CurriculumConfig {
  TierMixture s1 = {{Tier::kT1, 0.7}, {Tier::kT2, 0.3}};
  TierMixture s2 = {{Tier::kT1, 0.1}, {Tier::kT2, 0.7}, {Tier::kT3, 0.2}};
  TierMixture s3_start = {{Tier::kT2, 1.0}};
  TierMixture s3_end = {{Tier::kT2, 0.4}, {Tier::kT3, 0.4}, {Tier::kT4, 0.2}};
  // Datasets whose samples count as embodied for stage 4, in addition to
  // samples tagged "embodied".
  std::set<std::string> embodied_datasets;

  bool operator==(const CurriculumConfig&) const = default;
};

struct RetryPolicy {
  int max_attempts = 3;
  double base_delay_ms = 250.0;
  double max_delay_ms = 8000.0;
  double jitter = 0.2;  // +/- fraction of each delay

  bool operator==(const RetryPolicy&) const = default;
};

struct ConfigViolation {
  std::string field;
  std::string constraint;

  bool operator==(const ConfigViolation&) const = default;
};

// Checks every config invariant. An empty result means all hold.
std::vector<ConfigViolation> ValidateConfigs(const EntropyConfig& entropy,
                                             const TaxonomyConfig& taxonomy,
                                             const FilterConfig& filter,
                                             const RewardConfig& reward);

std::vector<ConfigViolation> ValidateCurriculum(const CurriculumConfig& config);
std::vector<ConfigViolation> ValidateRetry(const RetryPolicy& policy);

}  // namespace curate
