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

#include "curate/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curate/error.hpp"
#include "curate/rng.hpp"

namespace curate {
namespace {

bool HasAny(const std::set<std::string>& tags,
            const std::set<std::string>& wanted) {
  for (const auto& t : wanted) {
    if (tags.count(t)) return true;
  }
  return false;
}

Tier Max(Tier a, Tier b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

void CheckMixtureSum(const TierMixture& mixture) {
  double sum = 0.0;
  for (const auto& [tier, f] : mixture) sum += f;
  if (mixture.empty() || std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("stage mixture fractions sum to " +
                          std::to_string(sum) + ", expected 1");
  }
}

// Largest-remainder apportionment of `size` entries across the mixture.
std::map<Tier, std::size_t> Apportion(const TierMixture& mixture,
                                      std::size_t size) {
  std::map<Tier, std::size_t> quota;
  std::vector<std::pair<double, Tier>> remainders;
  std::size_t assigned = 0;
  for (const auto& [tier, f] : mixture) {
    const double exact = f * static_cast<double>(size);
    const auto base = static_cast<std::size_t>(std::floor(exact));
    quota[tier] = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), tier);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < size && i < remainders.size(); ++i) {
    ++quota[remainders[i].second];
    ++assigned;
  }
  return quota;
}

bool Feasible(const std::map<Tier, std::size_t>& quota,
              const std::map<Tier, std::vector<const ClassifiedSample*>>& pools) {
  for (const auto& [tier, n] : quota) {
    auto it = pools.find(tier);
    const std::size_t have = it == pools.end() ? 0 : it->second.size();
    if (n > have) return false;
  }
  return true;
}

}  // namespace

Tier ClassifyTier(double h_total, const std::set<std::string>& tags,
                  const TaxonomyConfig& config) {
  if (!(h_total >= 0.0 && h_total <= 1.0)) {
    throw InvalidArgument("h_total " + std::to_string(h_total) +
                          " outside [0, 1]");
  }
  Tier tier;
  if (h_total <= config.theta1) {
    tier = Tier::kT1;
  } else if (h_total <= config.theta2) {
    tier = Tier::kT2;
  } else if (h_total <= config.theta3) {
    tier = Tier::kT3;
  } else {
    tier = Tier::kT4;
  }
  if (HasAny(tags, config.promote_t4_tags)) return Tier::kT4;
  if (HasAny(tags, config.promote_t3_tags)) tier = Max(tier, Tier::kT3);
  return tier;
}

Json ClassifiedToJson(const ClassifiedSample& s) {
  Json j = Json::object();
  j["id"] = s.id;
  j["tier"] = std::string(ToString(s.tier));
  j["h_total"] = s.h_total;
  j["dataset"] = s.dataset;
  j["embodied"] = s.embodied;
  return j;
}

ClassifiedSample ClassifiedFromJson(const Json& record) {
  ClassifiedSample s;
  s.id = RequireString(record, "id");
  const std::string tier = RequireString(record, "tier");
  auto parsed = ParseTier(tier);
  if (!parsed) throw DataError("unknown tier \"" + tier + "\"");
  s.tier = *parsed;
  s.h_total = RequireNumber(record, "h_total");
  if (auto it = record.find("dataset"); it != record.end() && it->is_string()) {
    s.dataset = it->get<std::string>();
  }
  if (auto it = record.find("embodied"); it != record.end() && it->is_boolean()) {
    s.embodied = it->get<bool>();
  }
  return s;
}

double LinearSchedule(double progress) { return std::clamp(progress, 0.0, 1.0); }

double CosineSchedule(double progress) {
  const double p = std::clamp(progress, 0.0, 1.0);
  if (p == 0.0 || p == 1.0) return p;
  return 0.5 - 0.5 * std::cos(std::numbers::pi * p);
}

std::optional<Schedule> ScheduleByName(const std::string& name) {
  if (name == "linear") return Schedule(LinearSchedule);
  if (name == "cosine") return Schedule(CosineSchedule);
  return std::nullopt;
}

TierMixture StageMixture(Stage stage, double progress,
                         const CurriculumConfig& config,
                         const Schedule& schedule) {
  switch (stage) {
    case Stage::kS1: return config.s1;
    case Stage::kS2: return config.s2;
    case Stage::kS4: return {};
    case Stage::kS3: break;
  }
  if (!(progress >= 0.0 && progress <= 1.0)) {
    throw InvalidArgument("stage 3 progress must be in [0, 1]");
  }
  const double w = std::clamp(schedule(progress), 0.0, 1.0);
  TierMixture mixed;
  for (Tier t : kAllTiers) {
    double start = config.s3_start.count(t) ? config.s3_start.at(t) : 0.0;
    double end = config.s3_end.count(t) ? config.s3_end.at(t) : 0.0;
    const double f = (1.0 - w) * start + w * end;
    if (f > 0.0) mixed[t] = f;
  }
  return mixed;
}

CurriculumManifest BuildStageManifest(Stage stage,
                                      std::span<const ClassifiedSample> corpus,
                                      const ManifestOptions& options,
                                      const CurriculumConfig& config) {
  CurriculumManifest manifest;
  manifest.stage = stage;
  manifest.progress = stage == Stage::kS3 ? options.progress : 0.0;
  manifest.seed = options.seed;

  std::map<Tier, std::vector<const ClassifiedSample*>> pools;
  for (const auto& s : corpus) {
    if (stage == Stage::kS4 && !s.embodied) continue;
    pools[s.tier].push_back(&s);
  }
  // Input order must not leak into the draw.
  for (auto& [tier, pool] : pools) {
    std::sort(pool.begin(), pool.end(),
              [](const auto* a, const auto* b) { return a->id < b->id; });
  }

  TierMixture mixture;
  std::map<Tier, std::size_t> quota;
  if (stage == Stage::kS4) {
    std::size_t total = 0;
    for (const auto& [tier, pool] : pools) total += pool.size();
    if (total == 0) throw InvalidArgument("no embodied samples for stage S4");
    for (const auto& [tier, pool] : pools) {
      mixture[tier] =
          static_cast<double>(pool.size()) / static_cast<double>(total);
      quota[tier] = pool.size();
    }
    if (options.size && *options.size != total) {
      if (*options.size > total) {
        throw InvalidArgument("stage S4 has only " + std::to_string(total) +
                              " embodied samples");
      }
      quota = Apportion(mixture, *options.size);
    }
  } else {
    mixture = StageMixture(stage, options.progress, config, options.schedule);
    CheckMixtureSum(mixture);
    for (const auto& [tier, f] : mixture) {
      if (!pools.count(tier) || pools[tier].empty()) {
        throw InvalidArgument("tier " + std::string(ToString(tier)) + " empty");
      }
    }
    std::size_t size;
    if (options.size) {
      size = *options.size;
      quota = Apportion(mixture, size);
      for (const auto& [tier, n] : quota) {
        if (n > pools[tier].size()) {
          throw InvalidArgument(
              "tier " + std::string(ToString(tier)) + " has " +
              std::to_string(pools[tier].size()) + " samples, manifest needs " +
              std::to_string(n));
        }
      }
    } else {
      size = SIZE_MAX;
      for (const auto& [tier, f] : mixture) {
        const double cap = static_cast<double>(pools[tier].size()) / f;
        size = std::min(size, static_cast<std::size_t>(std::floor(cap + 1e-9)));
      }
      quota = Apportion(mixture, size);
      while (size > 0 && !Feasible(quota, pools)) {
        quota = Apportion(mixture, --size);
      }
    }
  }
  manifest.target_mixture = mixture;

  for (const auto& [tier, n] : quota) {
    if (n == 0) continue;
    std::vector<const ClassifiedSample*> pool = pools[tier];
    Rng rng(SplitMix64(options.seed) ^ static_cast<std::uint64_t>(tier));
    rng.Shuffle(pool);
    const double weight = mixture[tier] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      manifest.entries.push_back({pool[i]->id, tier, weight});
    }
  }
  return manifest;
}

std::vector<Json> ManifestToJsonLines(const CurriculumManifest& manifest) {
  std::vector<Json> lines;
  Json mixture = Json::object();
  for (const auto& [tier, f] : manifest.target_mixture) {
    mixture[std::string(ToString(tier))] = f;
  }
  Json header = Json::object();
  header["header"] = true;
  header["stage"] = std::string(ToString(manifest.stage));
  header["seed"] = manifest.seed;
  header["progress"] = manifest.progress;
  header["target_mixture"] = std::move(mixture);
  header["entries"] = manifest.entries.size();
  lines.push_back(std::move(header));
  for (const auto& e : manifest.entries) {
    Json j = Json::object();
    j["stage"] = std::string(ToString(manifest.stage));
    j["id"] = e.sample_id;
    j["tier"] = std::string(ToString(e.tier));
    j["weight"] = e.weight;
    lines.push_back(std::move(j));
  }
  return lines;
}

std::map<Tier, TierCount> TierHistogram(
    std::span<const ClassifiedSample> corpus) {
  std::map<Tier, TierCount> hist;
  for (Tier t : kAllTiers) hist[t] = {};
  for (const auto& s : corpus) ++hist[s.tier].count;
  if (!corpus.empty()) {
    for (auto& [tier, c] : hist) {
      c.fraction = static_cast<double>(c.count) /
                   static_cast<double>(corpus.size());
    }
  }
  return hist;
}

}  // namespace curate
