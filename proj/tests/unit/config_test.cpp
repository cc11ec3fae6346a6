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

#include "../common/temp_dir.hpp"
#include "curate/config.hpp"
#include "curate/error.hpp"
#include "doctest.h"

using namespace curate;

namespace {

bool HasField(const std::vector<ConfigViolation>& v, const std::string& field) {
  return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.field == field; });
}

}  // namespace

TEST_CASE("defaults are valid") {
  PipelineConfig cfg;
  CHECK(cfg.Validate().empty());
  CHECK(cfg.Get("alpha") == "0.6");
  CHECK(cfg.Get("theta2") == "0.5");
  CHECK(cfg.Get("tau") == "0.2");
  CHECK(cfg.Get("phi") == "0.85");
  CHECK(cfg.Get("kl_coeff") == "0.05");
  CHECK(cfg.Get("clip_eps") == "0.2");
  CHECK(cfg.Get("lambda_format") == "0.2");
  CHECK(cfg.Get("lambda_correct") == "0.8");
  CHECK(cfg.Get("block_size") == "8");
}

TEST_CASE("set and get round trip") {
  PipelineConfig cfg;
  cfg.Set("alpha", "0.25");
  CHECK(cfg.entropy.alpha == 0.25);
  CHECK(cfg.Get("alpha") == "0.25");
  cfg.Set("grid_dims", "4,4,2");
  CHECK(cfg.entropy.grid_dims == std::array<int, 3>{4, 4, 2});
  cfg.Set("promote_t4_tags", "temporal,forecast");
  CHECK(cfg.taxonomy.promote_t4_tags.count("forecast"));
  CHECK_THROWS_AS(cfg.Set("no_such_key", "1"), Error);
  CHECK_THROWS_AS(cfg.Set("alpha", "abc"), Error);
  CHECK_THROWS_AS(cfg.Get("no_such_key"), Error);
  for (const auto& key : PipelineConfig::Keys()) CHECK_NOTHROW(cfg.Get(key));
}

TEST_CASE("dump and load reproduce the config") {
  PipelineConfig cfg;
  cfg.Set("alpha", "0.1234567890123");
  cfg.Set("theta3", "0.8");
  cfg.Set("retry_attempts", "5");
  PipelineConfig copy;
  copy.LoadText(cfg.Dump());
  CHECK(copy == cfg);
}

TEST_CASE("load text syntax and errors") {
  PipelineConfig cfg;
  cfg.LoadText("# comment\n\n  tau = 0.3  \nphi=0.9\n");
  CHECK(cfg.filter.tau == 0.3);
  CHECK(cfg.filter.phi == 0.9);
  try {
    cfg.LoadText("tau = 0.3\nbogus\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("config line 2") != std::string::npos);
  }
  testing::TempDir dir;
  testing::WriteFile(dir / "c.conf", "kl_coeff = 0.1\n");
  PipelineConfig from_file;
  from_file.LoadFile(dir / "c.conf");
  CHECK(from_file.reward.kl_coeff == 0.1);
  PipelineConfig defaults;
  defaults.LoadFile("defaults");
  CHECK(defaults == PipelineConfig{});
  CHECK_THROWS_AS(defaults.LoadFile(dir / "missing.conf"), Error);
}

TEST_CASE("validation reports every violated invariant") {
  PipelineConfig cfg;
  cfg.Set("theta1", "0.6");
  CHECK(HasField(cfg.Validate(), "theta2"));
  cfg = PipelineConfig{};
  cfg.Set("alpha", "1.5");
  cfg.Set("block_size", "0");
  cfg.Set("phi", "1.2");
  const auto v = cfg.Validate();
  CHECK(HasField(v, "alpha"));
  CHECK(HasField(v, "block_size"));
  CHECK(HasField(v, "phi"));
  cfg = PipelineConfig{};
  cfg.Set("s1_mixture", "T1:0.5,T2:0.3");
  CHECK_FALSE(cfg.Validate().empty());
}
