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


#include <algorithm>
#include <cmath>

#include "curate/error.hpp"
#include "curate/rng.hpp"
#include "curate/stats.hpp"
#include "doctest.h"

using namespace curate;

TEST_CASE("normalize_scores") {
  const auto r = NormalizeScores(std::vector<double>{50.0, 100.0}, 1e-9);
  CHECK(r.values[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.values[1] < 1.0);
  CHECK_FALSE(r.negative_input);
  const auto zeros = NormalizeScores(std::vector<double>{0.0, 0.0}, 1e-9);
  CHECK(zeros.values == std::vector<double>{0.0, 0.0});
  const auto neg = NormalizeScores(std::vector<double>{-2.0, 4.0}, 1e-9);
  CHECK(neg.negative_input);
  CHECK(neg.values[0] == doctest::Approx(-0.5));
  CHECK_THROWS_AS(NormalizeScores(std::vector<double>{}, 1e-9), Error);
  CHECK_THROWS_AS(NormalizeScores(std::vector<double>{1.0}, 0.0), Error);
  CHECK_THROWS_AS(NormalizeScores(std::vector<double>{NAN}, 1e-9), Error);

  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> y(1 + rng.Index(20));
    for (auto& v : y) v = rng.Uniform(0, 1000);
    const auto n = NormalizeScores(y, 1e-9).values;
    const double peak = *std::max_element(y.begin(), y.end());
    for (std::size_t i = 0; i < y.size(); ++i) {
      CHECK(n[i] >= 0.0);
      CHECK(n[i] <= 1.0);
      CHECK(std::abs(n[i] - y[i] / (peak + 1e-9)) <= 1e-15);
    }
    // Order preserving.
    for (std::size_t i = 1; i < y.size(); ++i) CHECK((y[i - 1] < y[i]) == (n[i - 1] < n[i]));
  }
}

TEST_CASE("dataset distribution") {
  std::vector<VqaSample> corpus;
  for (int i = 0; i < 6; ++i) {
    VqaSample s;
    s.id = std::to_string(i);
    s.dataset_name = i < 3 ? "b" : (i < 5 ? "a" : "c");
    corpus.push_back(s);
  }
  const auto rows = DistributionReport(corpus);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].dataset == "b");
  CHECK(rows[0].count == 3);
  CHECK(rows[0].ratio == doctest::Approx(0.5));
  CHECK(rows[1].dataset == "a");
  CHECK(rows[2].dataset == "c");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    sum += r.ratio;
    count += r.count;
  }
  CHECK(sum == doctest::Approx(1.0));
  CHECK(count == corpus.size());

  auto shuffled = corpus;
  Rng rng(3);
  rng.Shuffle(shuffled);
  const auto again = DistributionReport(shuffled);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].dataset == rows[i].dataset);
    CHECK(again[i].count == rows[i].count);
  }

  CHECK(DistributionReport({}).empty());
  const std::string text = FormatDistribution(rows);
  CHECK(text.find("dataset") == 0);
  CHECK(text.find("50.00%") != std::string::npos);
}
