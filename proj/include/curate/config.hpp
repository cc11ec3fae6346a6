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

// Every tunable of the pipeline under one flat key space. The same keys are
// used by config files ("key = value" lines, '#' comments), by CLI flag
// overrides (--key value) and by curate_config_set in the C API.
//
// Value syntax: numbers in C locale; lists are comma separated
// ("multi-view, cross-view"); grid_dims is "nx,ny,nz"; grid_bounds is
// "x_lo,x_hi,y_lo,y_hi,z_lo,z_hi"; mixtures are "T1:0.7,T2:0.3".

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "curate/types.hpp"

namespace curate {

struct PipelineConfig {
  EntropyConfig entropy;
  TaxonomyConfig taxonomy;
  FilterConfig filter;
  RewardConfig reward;
  CurriculumConfig curriculum;
  RetryPolicy retry;
  double normalize_eps = 1e-9;

  bool operator==(const PipelineConfig&) const = default;

  static const std::vector<std::string>& Keys();

  // Throws InvalidArgument for an unknown key or an unparseable value.
  void Set(std::string_view key, std::string_view value);
  std::string Get(std::string_view key) const;

  // All invariant violations across every section.
  std::vector<ConfigViolation> Validate() const;

  // "key = value" document of every key; LoadText(Dump()) reproduces *this.
  std::string Dump() const;
  void LoadText(std::string_view text);
  // "defaults" selects the built-in defaults without touching the disk.
  void LoadFile(const std::filesystem::path& path);
};

}  // namespace curate
