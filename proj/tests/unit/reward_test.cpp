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
#include <limits>
#include <stdexcept>

#include "../common/oracles.hpp"
#include "curate/error.hpp"
#include "curate/reward.hpp"
#include "curate/rng.hpp"
#include "doctest.h"

using namespace curate;

namespace {

VqaSample Sample(TaskKind kind, std::string answer) {
  VqaSample s;
  s.id = "r";
  s.task_kind = kind;
  s.answer = std::move(answer);
  return s;
}

bool Fails(std::string_view response, ParseFailure expected) {
  const auto r = ParseAnswer(response);
  return std::holds_alternative<ParseFailure>(r) && std::get<ParseFailure>(r) == expected;
}

class ThrowingBackend : public SemanticBackend {
 public:
  double Similarity(std::string_view, std::string_view) override {
    throw std::runtime_error("embedding service down");
  }
};

class FixedBackend : public SemanticBackend {
 public:
  double Similarity(std::string_view, std::string_view) override { return 0.625; }
};

}  // namespace

TEST_CASE("parse_answer") {
  CHECK(std::get<std::string>(ParseAnswer("<answer>B</answer>")) == "B");
  CHECK(std::get<std::string>(ParseAnswer("think... <answer>  [1, 2] </answer> done")) ==
        "[1, 2]");
  CHECK(std::get<std::string>(ParseAnswer("<answer></answer>")).empty());
  CHECK(Fails("B", ParseFailure::kMissingOpen));
  CHECK(Fails("B</answer>", ParseFailure::kMissingOpen));
  CHECK(Fails("<answer>B", ParseFailure::kMissingClose));
  CHECK(Fails("<answer>A</answer><answer>B</answer>", ParseFailure::kMultipleSpans));
  CHECK(Fails("<answer>A<answer>B</answer></answer>", ParseFailure::kNested));
  CHECK(ToString(ParseFailure::kNested) == "nested");
  CHECK(ToString(ParseFailure::kMissingOpen) == "missing-open");
}

TEST_CASE("normalization and exact match") {
  CHECK(NormalizeText("  Front   LEFT \t") == "front left");
  CHECK(ScoreExact("b", " B ") == 1.0);
  CHECK(ScoreExact("front left", "front-left") == 0.0);
}

TEST_CASE("point scoring") {
  CHECK(ScorePoint({3, 4}, {0, 0}, 10.0).value == doctest::Approx(0.5));
  CHECK(ScorePoint({0, 0}, {0, 0}, 10.0).value == 1.0);
  CHECK(ScorePoint({30, 40}, {0, 0}, 10.0).value == 0.0);
  const auto nan = ScorePoint({NAN, 0}, {0, 0}, 10.0);
  CHECK(nan.value == 0.0);
  CHECK(nan.flagged);
  CHECK_THROWS_AS(ScorePoint({0, 0}, {0, 0}, 0.0), Error);
}

TEST_CASE("iou scoring") {
  CHECK(ScoreIou({0, 0, 2, 2}, {1, 1, 3, 3}).value == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(ScoreIou({0, 0, 2, 2}, {0, 0, 2, 2}).value == 1.0);
  CHECK(ScoreIou({0, 0, 1, 1}, {2, 2, 3, 3}).value == 0.0);
  CHECK(ScoreIou({0, 0, 1, 1}, {1, 0, 2, 1}).value == 0.0);  // touching edges
  CHECK(ScoreIou({1, 1, 1, 1}, {1, 1, 1, 1}).value == 1.0);
  CHECK(ScoreIou({1, 1, 1, 1}, {0, 0, 2, 2}).value == 0.0);
  const auto bad = ScoreIou({2, 0, 0, 2}, {0, 0, 2, 2});
  CHECK(bad.value == 0.0);
  CHECK(bad.flagged);
  CHECK(ScoreIou({0, 0, INFINITY, 2}, {0, 0, 2, 2}).flagged);

  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    int a[4], b[4];
    for (int* box : {a, b}) {
      box[0] = static_cast<int>(rng.Index(30));
      box[1] = static_cast<int>(rng.Index(30));
      box[2] = box[0] + 1 + static_cast<int>(rng.Index(15));
      box[3] = box[1] + 1 + static_cast<int>(rng.Index(15));
    }
    const Box2D pa{double(a[0]), double(a[1]), double(a[2]), double(a[3])};
    const Box2D pb{double(b[0]), double(b[1]), double(b[2]), double(b[3])};
    const double iou = ScoreIou(pa, pb).value;
    CHECK(std::abs(iou - oracle::GridIou(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3])) <=
          1e-9);
    CHECK(iou == ScoreIou(pb, pa).value);
    CHECK(iou >= 0.0);
    CHECK(iou <= 1.0);
  }
}

TEST_CASE("semantic scoring") {
  CHECK(TokenF1("a red car", "a red car") == 1.0);
  CHECK(TokenF1("red car", "a red car parked") == doctest::Approx(2.0 * 1.0 * 0.5 / 1.5));
  CHECK(TokenF1("the the", "the") == doctest::Approx(2.0 * 0.5 * 1.0 / 1.5));
  CHECK(TokenF1("", "x") == 0.0);
  CHECK(TokenF1("", "") == 1.0);
  ThrowingBackend down;
  const auto fallback = ScoreSemantic("red car", "a red car parked", &down);
  CHECK(fallback.flagged);
  CHECK(fallback.value == doctest::Approx(TokenF1("red car", "a red car parked")));
  FixedBackend fixed;
  CHECK(ScoreSemantic("x", "y", &fixed).value == 0.625);
  CHECK_FALSE(ScoreSemantic("x", "y", &fixed).flagged);
}

TEST_CASE("number lists") {
  CHECK(*ParseNumberList("[12, 34]") == std::vector<double>{12, 34});
  CHECK(*ParseNumberList(" [1.5,-2,3e1,4] ") == std::vector<double>{1.5, -2, 30, 4});
  CHECK_FALSE(ParseNumberList("(1, 2)"));
  CHECK_FALSE(ParseNumberList("[1, two]"));
  CHECK_FALSE(ParseNumberList(""));
}

TEST_CASE("compute_reward combines channels") {
  RewardConfig cfg;
  SUBCASE("exact match") {
    const auto s = Sample(TaskKind::kSelection, "B");
    const auto r = ComputeReward("<answer>b</answer>", s, cfg);
    CHECK(r.r_format == 1.0);
    CHECK(r.r_correct == 1.0);
    CHECK(r.r_total == doctest::Approx(1.0));
    const auto wrong = ComputeReward("<answer>C</answer>", s, cfg);
    CHECK(wrong.r_total == doctest::Approx(0.2));
  }
  SUBCASE("unparseable text task scores the raw response") {
    const auto r = ComputeReward("B", Sample(TaskKind::kSelection, "B"), cfg);
    CHECK(r.r_format == 0.0);
    CHECK(r.r_correct == 1.0);
    CHECK(r.r_total == doctest::Approx(0.8));
  }
  SUBCASE("unparseable structured task scores zero") {
    const auto r = ComputeReward("[10, 10]", Sample(TaskKind::kPoint, "[10, 10]"), cfg);
    CHECK(r.r_total == 0.0);
  }
  SUBCASE("point with default radius") {
    const auto r = ComputeReward("<answer>[30, 40]</answer>", Sample(TaskKind::kPoint, "[0,0]"),
                                 cfg);
    CHECK(r.r_correct == doctest::Approx(0.0));
    const auto near = ComputeReward("<answer>[3, 4]</answer>",
                                    Sample(TaskKind::kPoint, "[0,0]"), cfg);
    CHECK(near.r_correct == doctest::Approx(0.9));
  }
  SUBCASE("point against a box uses half the diagonal") {
    // Box (0,0,6,8): center (3,4), half diagonal 5.
    const auto r = ComputeReward("<answer>[3, 6.5]</answer>",
                                 Sample(TaskKind::kPoint, "[0,0,6,8]"), cfg);
    CHECK(r.r_correct == doctest::Approx(0.5));
  }
  SUBCASE("box") {
    const auto r = ComputeReward("<answer>[0,0,2,2]</answer>",
                                 Sample(TaskKind::kBox, "[1,1,3,3]"), cfg);
    CHECK(r.r_correct == doctest::Approx(1.0 / 7.0));
    const auto junk = ComputeReward("<answer>left side</answer>",
                                    Sample(TaskKind::kBox, "[1,1,3,3]"), cfg);
    CHECK(junk.r_correct == 0.0);
    CHECK(junk.r_format == 1.0);
  }
  SUBCASE("bad ground truth is a data error") {
    CHECK_THROWS_AS(ComputeReward("<answer>[1,1]</answer>", Sample(TaskKind::kPoint, "mid"), cfg),
                    Error);
    CHECK_THROWS_AS(ComputeReward("<answer>[1,1,2,2]</answer>", Sample(TaskKind::kBox, "[1,2]"),
                                  cfg),
                    Error);
  }
  SUBCASE("r_total is the lambda combination on a grid") {
    for (double f : {0.0, 0.5, 1.0}) {
      for (double c : {0.0, 0.5, 1.0}) {
        CHECK(std::abs(CombineReward(f, c, cfg) - (0.2 * f + 0.8 * c)) <= 1e-12);
      }
    }
    RewardConfig heavy;
    heavy.lambda_format = 0.9;
    heavy.lambda_correct = 0.9;
    CHECK(CombineReward(1.0, 1.0, heavy) == 1.0);
  }
}
