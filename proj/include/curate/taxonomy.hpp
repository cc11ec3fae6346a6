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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "curate/records.hpp"
#include "curate/types.hpp"

namespace curate {

// Threshold tiers (T1: h <= theta1, T2: h <= theta2, T3: h <= theta3,
// otherwise T4), then tag promotion: a promote_t4 tag lifts the label to T4,
// a promote_t3 tag lifts it to at least T3. Promotion never demotes.
// Throws InvalidArgument for h outside [0, 1].
Tier ClassifyTier(double h_total, const std::set<std::string>& tags,
                  const TaxonomyConfig& config);

struct ClassifiedSample {
  std::string id;
  Tier tier = Tier::kT1;
  double h_total = 0.0;
  std::string dataset;
  bool embodied = false;

  bool operator==(const ClassifiedSample&) const = default;
};

// {"id", "tier", "h_total", "dataset", "embodied"}
Json ClassifiedToJson(const ClassifiedSample& sample);
ClassifiedSample ClassifiedFromJson(const Json& record);

// Maps stage-3 training progress in [0,1] to a ramp weight in [0,1].
using Schedule = std::function<double(double progress)>;

double LinearSchedule(double progress);
double CosineSchedule(double progress);
// "linear" or "cosine"; nullopt otherwise.
std::optional<Schedule> ScheduleByName(const std::string& name);

// Target mixture of a stage. Tiers with zero mass are omitted. Stage 4 has no
// fixed mixture (it mirrors the embodied subset) and yields an empty map.
TierMixture StageMixture(Stage stage, double progress,
                         const CurriculumConfig& config,
                         const Schedule& schedule = LinearSchedule);

struct ManifestEntry {
  std::string sample_id;
  Tier tier = Tier::kT1;
  double weight = 0.0;  // target fraction of the tier / entries in the tier

  bool operator==(const ManifestEntry&) const = default;
};

struct CurriculumManifest {
  Stage stage = Stage::kS1;
  double progress = 0.0;
  std::uint64_t seed = 0;
  TierMixture target_mixture;
  std::vector<ManifestEntry> entries;

  bool operator==(const CurriculumManifest&) const = default;
};

struct ManifestOptions {
  double progress = 0.0;       // only used by stage 3
  std::optional<std::size_t> size;  // default: largest feasible
  Schedule schedule = LinearSchedule;
  std::uint64_t seed = 0;
};

// Draws each tier's quota without replacement from a seeded shuffle of the
// tier, with quotas apportioned by largest remainder so every realized
// fraction is within 1/|entries| of the target. Stage 4 takes every embodied
// sample. Throws InvalidArgument naming the tier when a required tier is
// empty ("tier T4 empty") or too small for the requested size.
CurriculumManifest BuildStageManifest(Stage stage,
                                      std::span<const ClassifiedSample> corpus,
                                      const ManifestOptions& options,
                                      const CurriculumConfig& config);

// Header line followed by one {"stage", "id", "tier", "weight"} per entry.
std::vector<Json> ManifestToJsonLines(const CurriculumManifest& manifest);

struct TierCount {
  std::size_t count = 0;
  double fraction = 0.0;
};

// Always holds all four tiers; fractions are all zero for an empty corpus.
std::map<Tier, TierCount> TierHistogram(std::span<const ClassifiedSample> corpus);

}  // namespace curate
