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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "../common/temp_dir.hpp"
#include "curate/curate.h"
#include "doctest.h"

namespace {

using Context = std::unique_ptr<curate_context, decltype(&curate_context_free)>;

Context NewContext() { return Context(curate_context_new(), &curate_context_free); }

std::size_t CountLines(const std::filesystem::path& path) {
  const std::string text = testing::ReadFile(path);
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

std::string Get(curate_context* ctx, const char* key) {
  std::size_t needed = 0;
  REQUIRE(curate_config_get(ctx, key, nullptr, 0, &needed) == CURATE_INVALID_ARGUMENT);
  std::string buf(needed, '\0');
  REQUIRE(curate_config_get(ctx, key, buf.data(), buf.size(), &needed) == CURATE_OK);
  buf.resize(needed - 1);
  return buf;
}

}  // namespace

TEST_CASE("context lifecycle and config") {
  CHECK(std::string(curate_version()).size() > 0);
  auto ctx = NewContext();
  REQUIRE(ctx);
  CHECK(std::string(curate_last_error(ctx.get())).empty());
  CHECK(Get(ctx.get(), "alpha") == "0.6");
  CHECK(curate_config_set(ctx.get(), "alpha", "0.5") == CURATE_OK);
  CHECK(Get(ctx.get(), "alpha") == "0.5");
  CHECK(curate_config_set(ctx.get(), "nope", "1") == CURATE_INVALID_ARGUMENT);
  CHECK(std::string(curate_last_error(ctx.get())).find("nope") != std::string::npos);
  CHECK(curate_config_key_count() > 20);
  CHECK(curate_config_key_name(curate_config_key_count()) == nullptr);
  CHECK(curate_config_set(ctx.get(), "theta1", "0.6") == CURATE_OK);
  CHECK(curate_config_validate(ctx.get()) == CURATE_INVALID_ARGUMENT);
  CHECK(curate_config_load(ctx.get(), "defaults") == CURATE_OK);
  CHECK(curate_config_validate(ctx.get()) == CURATE_OK);
  CHECK(curate_config_load(ctx.get(), "/nonexistent/curate.conf") != CURATE_OK);
  CHECK(curate_set_quality_endpoint(ctx.get(), "ftp://x") == CURATE_INVALID_ARGUMENT);
  CHECK(curate_set_quality_endpoint(ctx.get(), "http://127.0.0.1:8080/judge") == CURATE_OK);
  CHECK(curate_score(nullptr, "a", "b") == CURATE_INVALID_ARGUMENT);
}

TEST_CASE("numeric entry points") {
  auto ctx = NewContext();
  double out = -1.0;
  std::vector<float> depth(16 * 16);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) depth[r * 16 + c] = ((r + c) % 2) ? 15.0f : 5.0f;
  REQUIRE(curate_depth_entropy(ctx.get(), depth.data(), 16, 16, &out) == CURATE_OK);
  CHECK(out == doctest::Approx(1.0));
  CHECK(curate_depth_entropy(ctx.get(), depth.data(), 4, 4, &out) == CURATE_INVALID_ARGUMENT);

  const double xyz[] = {-35.0, -35.0, -2.5, 35.0, 35.0, 4.5};
  REQUIRE(curate_entropy_3d(ctx.get(), xyz, 2, &out) == CURATE_OK);
  CHECK(out == doctest::Approx(0.125));

  int tier = 0;
  const char* tags[] = {"temporal"};
  CHECK(curate_classify_tier(ctx.get(), 0.3, nullptr, 0, &tier) == CURATE_OK);
  CHECK(tier == 1);
  CHECK(curate_classify_tier(ctx.get(), 0.1, tags, 1, &tier) == CURATE_OK);
  CHECK(tier == 4);
  CHECK(curate_classify_tier(ctx.get(), 1.5, nullptr, 0, &tier) == CURATE_INVALID_ARGUMENT);

  int keep = -1;
  const char* reason = nullptr;
  CHECK(curate_retain(ctx.get(), 0.5, 0.85, &keep, &reason) == CURATE_OK);
  CHECK(keep == 0);
  CHECK(std::string(reason) == "low-quality");
  CHECK(curate_retain(ctx.get(), 0.2, 0.1, &keep, &reason) == CURATE_OK);
  CHECK(std::string(reason) == "low-entropy");
  CHECK(curate_retain(ctx.get(), 0.21, 0.86, &keep, &reason) == CURATE_OK);
  CHECK(keep == 1);

  const double a[] = {0, 0, 2, 2}, b[] = {1, 1, 3, 3};
  CHECK(curate_score_iou(ctx.get(), a, b, &out) == CURATE_OK);
  CHECK(std::abs(out - 1.0 / 7.0) <= 1e-12);

  double f = 0, c = 0, t = 0;
  CHECK(curate_compute_reward(ctx.get(), "<answer>B</answer>", "B", "selection", &f, &c, &t) ==
        CURATE_OK);
  CHECK(t == doctest::Approx(1.0));
  CHECK(curate_compute_reward(ctx.get(), "x", "B", "dance", &f, &c, &t) ==
        CURATE_INVALID_ARGUMENT);

  const double rewards[] = {1, 0, 1, 0};
  double adv[4];
  CHECK(curate_group_advantages(ctx.get(), rewards, 4, adv) == CURATE_OK);
  CHECK(adv[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(adv[1] == doctest::Approx(-1.0).epsilon(1e-6));

  const double scores[] = {50, 100};
  double norm[2];
  CHECK(curate_normalize_scores(ctx.get(), scores, 2, norm) == CURATE_OK);
  CHECK(norm[0] == doctest::Approx(0.5));
  CHECK(curate_normalize_scores(ctx.get(), scores, 0, norm) == CURATE_INVALID_ARGUMENT);
}

TEST_CASE("stages through the c api") {
  testing::TempDir dir;
  auto ctx = NewContext();
  curate_set_seed(ctx.get(), 7);
  curate_set_retry_sleep(ctx.get(), 0);
  const std::string syn = (dir / "syn").string();
  REQUIRE(curate_synth(ctx.get(), syn.c_str(), 12) == CURATE_OK);
  const std::string corpus = syn + "/corpus.jsonl";
  const auto p = [&](const char* name) { return (dir / name).string(); };

  REQUIRE(curate_score(ctx.get(), corpus.c_str(), p("e.jsonl").c_str()) == CURATE_OK);
  CHECK(CountLines(p("e.jsonl")) == 12);
  REQUIRE(curate_classify(ctx.get(), corpus.c_str(), p("e.jsonl").c_str(),
                          p("t.jsonl").c_str()) == CURATE_OK);
  CHECK(curate_assess(ctx.get(), corpus.c_str(), p("q.jsonl").c_str()) ==
        CURATE_INVALID_ARGUMENT);
  curate_set_quality_stub(ctx.get(), 3, 0);
  REQUIRE(curate_assess(ctx.get(), corpus.c_str(), p("q.jsonl").c_str()) == CURATE_OK);
  REQUIRE(curate_filter(ctx.get(), corpus.c_str(), p("e.jsonl").c_str(), p("q.jsonl").c_str(),
                        p("k.jsonl").c_str(), p("d.jsonl").c_str()) == CURATE_OK);
  CHECK(CountLines(p("k.jsonl")) + CountLines(p("d.jsonl")) == 12);
  CHECK(curate_curriculum(ctx.get(), p("t.jsonl").c_str(), p("m.jsonl").c_str(), "S2", 0.0, -1,
                          "linear") == CURATE_OK);
  CHECK(curate_curriculum(ctx.get(), p("t.jsonl").c_str(), p("m.jsonl").c_str(), "S9", 0.0, -1,
                          "linear") == CURATE_INVALID_ARGUMENT);
  CHECK(curate_curriculum(ctx.get(), p("t.jsonl").c_str(), p("m.jsonl").c_str(), "S1", 0.0,
                          5000, "linear") == CURATE_DATA);
  CHECK(curate_stats(ctx.get(), "tiers", p("t.jsonl").c_str(), "jsonl", p("s.jsonl").c_str()) ==
        CURATE_OK);
  CHECK(curate_stats(ctx.get(), "median", p("t.jsonl").c_str(), "jsonl",
                     p("s.jsonl").c_str()) == CURATE_INVALID_ARGUMENT);

  curate_set_quality_stub(ctx.get(), 3, 1);
  CHECK(curate_config_set(ctx.get(), "retry_attempts", "1") == CURATE_OK);
  CHECK(curate_assess(ctx.get(), corpus.c_str(), p("q2.jsonl").c_str()) == CURATE_SERVICE);
  CHECK(CountLines(p("q2.jsonl")) == 12);

  const std::string bad = syn + "/bad.jsonl";
  testing::WriteFile(bad, testing::ReadFile(corpus) + "{broken\n");
  CHECK(curate_score(ctx.get(), bad.c_str(), p("e2.jsonl").c_str()) == CURATE_DATA);
  CHECK(curate_record_error_count(ctx.get()) == 1);
  CHECK(std::string(curate_record_error(ctx.get(), 0)).find(":13:") != std::string::npos);
  CHECK(curate_record_error(ctx.get(), 1) == nullptr);

  REQUIRE(curate_fusion_generate(ctx.get(), p("fx.json").c_str()) == CURATE_OK);
  CHECK(curate_fusion_verify(ctx.get(), p("fx.json").c_str(), p("fv.jsonl").c_str()) ==
        CURATE_OK);
  std::string fx = testing::ReadFile(dir / "fx.json");
  const auto pos = fx.find("\"data\":[") + 8;
  fx.insert(pos, "9");
  testing::WriteFile(dir / "fx.json", fx);
  CHECK(curate_fusion_verify(ctx.get(), p("fx.json").c_str(), p("fv.jsonl").c_str()) ==
        CURATE_DATA);
}

TEST_CASE("warnings from stats normalize") {
  testing::TempDir dir;
  auto ctx = NewContext();
  testing::WriteFile(dir / "s.jsonl", "{\"name\":\"a\",\"score\":-1}\n{\"name\":\"b\",\"score\":2}\n");
  CHECK(curate_stats(ctx.get(), "normalize", (dir / "s.jsonl").c_str(), "text",
                     (dir / "o.txt").c_str()) == CURATE_OK);
  CHECK(curate_warning_count(ctx.get()) == 1);
  CHECK(curate_warning(ctx.get(), 5) == nullptr);
}
