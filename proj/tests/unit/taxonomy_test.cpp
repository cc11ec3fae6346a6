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

#include <cmath>
#include <set>

#include "curate/error.hpp"
#include "curate/rng.hpp"
#include "curate/taxonomy.hpp"
#include "doctest.h"

using namespace curate;

namespace {

std::vector<ClassifiedSample> Corpus(std::size_t per_tier, std::size_t embodied_every = 3) {
  std::vector<ClassifiedSample> out;
  std::size_t n = 0;
  for (Tier t : kAllTiers) {
    for (std::size_t i = 0; i < per_tier; ++i, ++n) {
      ClassifiedSample s;
      s.id = "s" + std::to_string(1000 + n);
      s.tier = t;
      s.h_total = 0.1 + 0.2 * (static_cast<int>(t) - 1);
      s.dataset = "d";
      s.embodied = n % embodied_every == 0;
      out.push_back(s);
    }
  }
  return out;
}

double MixtureSum(const TierMixture& m) {
  double s = 0.0;
  for (const auto& [t, f] : m) s += f;
  return s;
}

}  // namespace

TEST_CASE("classify_tier thresholds are inclusive upper bounds") {
  TaxonomyConfig cfg;
  const std::set<std::string> none;
  CHECK(ClassifyTier(0.0, none, cfg) == Tier::kT1);
  CHECK(ClassifyTier(0.3, none, cfg) == Tier::kT1);
  CHECK(ClassifyTier(0.3 + 1e-9, none, cfg) == Tier::kT2);
  CHECK(ClassifyTier(0.5, none, cfg) == Tier::kT2);
  CHECK(ClassifyTier(0.6, none, cfg) == Tier::kT3);
  CHECK(ClassifyTier(0.7, none, cfg) == Tier::kT3);
  CHECK(ClassifyTier(0.7 + 1e-9, none, cfg) == Tier::kT4);
  CHECK(ClassifyTier(1.0, none, cfg) == Tier::kT4);
  CHECK_THROWS_AS(ClassifyTier(-1e-12, none, cfg), Error);
  CHECK_THROWS_AS(ClassifyTier(1.0 + 1e-12, none, cfg), Error);
  CHECK_THROWS_AS(ClassifyTier(NAN, none, cfg), Error);
}

TEST_CASE("tag promotion only raises the tier") {
  TaxonomyConfig cfg;
  CHECK(ClassifyTier(0.1, {"multi-view"}, cfg) == Tier::kT3);
  CHECK(ClassifyTier(0.9, {"multi-view"}, cfg) == Tier::kT4);
  CHECK(ClassifyTier(0.1, {"temporal"}, cfg) == Tier::kT4);
  CHECK(ClassifyTier(0.1, {"cross-view", "prediction"}, cfg) == Tier::kT4);
  CHECK(ClassifyTier(0.1, {"counting"}, cfg) == Tier::kT1);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double h = rng.Uniform();
    const Tier base = ClassifyTier(h, {}, cfg);
    CHECK(ClassifyTier(h, {"multi-view"}, cfg) >= base);
    CHECK(ClassifyTier(h, {"temporal"}, cfg) == Tier::kT4);
    // Monotone in h.
    CHECK(ClassifyTier(std::min(1.0, h + 0.05), {}, cfg) >= base);
  }
}

TEST_CASE("stage mixtures") {
  CurriculumConfig cfg;
  CHECK(StageMixture(Stage::kS1, 0.0, cfg) == TierMixture{{Tier::kT1, 0.7}, {Tier::kT2, 0.3}});
  CHECK(StageMixture(Stage::kS2, 0.0, cfg).at(Tier::kT2) == 0.7);
  CHECK(StageMixture(Stage::kS3, 0.0, cfg) == TierMixture{{Tier::kT2, 1.0}});
  const auto end = StageMixture(Stage::kS3, 1.0, cfg);
  CHECK(end.at(Tier::kT2) == doctest::Approx(0.4));
  CHECK(end.at(Tier::kT3) == doctest::Approx(0.4));
  CHECK(end.at(Tier::kT4) == doctest::Approx(0.2));
  const auto mid = StageMixture(Stage::kS3, 0.5, cfg);
  CHECK(mid.at(Tier::kT2) == doctest::Approx(0.7));
  CHECK(mid.at(Tier::kT4) == doctest::Approx(0.1));
  const auto cos_q = StageMixture(Stage::kS3, 0.25, cfg, CosineSchedule);
  CHECK(cos_q.at(Tier::kT4) == doctest::Approx(0.2 * (0.5 - 0.5 * std::cos(M_PI / 4))));
  CHECK(StageMixture(Stage::kS4, 0.0, cfg).empty());
  for (double p = 0.0; p <= 1.0; p += 0.1) {
    CHECK(std::abs(MixtureSum(StageMixture(Stage::kS3, p, cfg)) - 1.0) <= 1e-9);
    CHECK(std::abs(MixtureSum(StageMixture(Stage::kS3, p, cfg, CosineSchedule)) - 1.0) <= 1e-9);
  }
  CHECK_THROWS_AS(StageMixture(Stage::kS3, 1.5, cfg), Error);
}

TEST_CASE("schedules") {
  CHECK(LinearSchedule(0.25) == 0.25);
  CHECK(CosineSchedule(0.0) == 0.0);
  CHECK(CosineSchedule(1.0) == 1.0);
  CHECK(CosineSchedule(0.5) == doctest::Approx(0.5));
  CHECK(ScheduleByName("linear"));
  CHECK(ScheduleByName("cosine"));
  CHECK_FALSE(ScheduleByName("step"));
}

TEST_CASE("stage manifests respect the mixture") {
  CurriculumConfig cfg;
  const auto corpus = Corpus(25);
  for (Stage stage : {Stage::kS1, Stage::kS2, Stage::kS3}) {
    for (std::size_t size : {10u, 23u, 35u}) {
      ManifestOptions opts;
      opts.size = size;
      opts.progress = 0.6;
      opts.seed = 9;
      const auto m = BuildStageManifest(stage, corpus, opts, cfg);
      REQUIRE(m.entries.size() == size);
      CHECK(std::abs(MixtureSum(m.target_mixture) - 1.0) <= 1e-9);
      std::set<std::string> ids;
      std::map<Tier, std::size_t> counts;
      double weight = 0.0;
      for (const auto& e : m.entries) {
        ids.insert(e.sample_id);
        ++counts[e.tier];
        weight += e.weight;
      }
      CHECK(ids.size() == size);
      CHECK(weight == doctest::Approx(1.0));
      for (const auto& [tier, f] : m.target_mixture) {
        const double realized = static_cast<double>(counts[tier]) / size;
        CHECK(std::abs(realized - f) <= 1.0 / size + 1e-12);
      }
      for (const auto& [tier, n] : counts) CHECK(m.target_mixture.count(tier));
    }
  }
}

TEST_CASE("manifest determinism and seeds") {
  CurriculumConfig cfg;
  const auto corpus = Corpus(20);
  ManifestOptions opts;
  opts.size = 20;
  opts.seed = 1;
  const auto a = BuildStageManifest(Stage::kS1, corpus, opts, cfg);
  CHECK(a == BuildStageManifest(Stage::kS1, corpus, opts, cfg));
  auto reversed = corpus;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(a == BuildStageManifest(Stage::kS1, reversed, opts, cfg));
  opts.seed = 2;
  CHECK(a.entries != BuildStageManifest(Stage::kS1, corpus, opts, cfg).entries);
}

TEST_CASE("manifest errors and defaults") {
  CurriculumConfig cfg;
  auto corpus = Corpus(10);
  std::erase_if(corpus, [](const auto& s) { return s.tier == Tier::kT4; });
  ManifestOptions opts;
  opts.progress = 1.0;
  try {
    BuildStageManifest(Stage::kS3, corpus, opts, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "tier T4 empty");
  }
  opts.progress = 0.0;
  CHECK_NOTHROW(BuildStageManifest(Stage::kS3, corpus, opts, cfg));

  opts.size = 1000;
  CHECK_THROWS_AS(BuildStageManifest(Stage::kS1, corpus, opts, cfg), Error);

  opts.size.reset();
  const auto s1 = BuildStageManifest(Stage::kS1, Corpus(10), opts, cfg);
  // T1 (10 samples) at 0.7 limits the size to 14.
  CHECK(s1.entries.size() == 14);

  auto none = Corpus(4, 1000);
  for (auto& s : none) s.embodied = false;
  CHECK_THROWS_AS(BuildStageManifest(Stage::kS4, none, opts, cfg), Error);
  const auto s4 = BuildStageManifest(Stage::kS4, Corpus(6), opts, cfg);
  for (const auto& e : s4.entries) CHECK(e.weight > 0.0);
  CHECK(s4.entries.size() == 8);  // every third of 24 samples
}

TEST_CASE("manifest lines and classified records") {
  CurriculumConfig cfg;
  ManifestOptions opts;
  opts.size = 10;
  opts.seed = 4;
  const auto m = BuildStageManifest(Stage::kS2, Corpus(10), opts, cfg);
  const auto lines = ManifestToJsonLines(m);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0]["header"] == true);
  CHECK(lines[0]["seed"] == 4);
  CHECK(lines[0]["target_mixture"]["T2"] == 0.7);
  CHECK(lines[1]["stage"] == "S2");
  CHECK(lines[1].contains("id"));
  CHECK(lines[1].contains("weight"));

  ClassifiedSample c{"x", Tier::kT3, 0.55, "ds", true};
  CHECK(ClassifiedFromJson(ClassifiedToJson(c)) == c);
  Json bad = ClassifiedToJson(c);
  bad["tier"] = "T9";
  CHECK_THROWS_AS(ClassifiedFromJson(bad), Error);
}

TEST_CASE("tier histogram") {
  const auto h = TierHistogram({});
  CHECK(h.size() == 4);
  for (const auto& [t, c] : h) CHECK(c.fraction == 0.0);
  const auto full = TierHistogram(Corpus(5));
  for (const auto& [t, c] : full) CHECK(c.fraction == doctest::Approx(0.25));
}
