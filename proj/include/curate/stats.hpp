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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "curate/types.hpp"

namespace curate {

struct NormalizedScores {
  std::vector<double> values;
  bool negative_input = false;  // formula applied verbatim to negative scores
};

// y_i / (max(y) + eps). Throws InvalidArgument on an empty list, a
// non-finite entry or eps <= 0.
NormalizedScores NormalizeScores(std::span<const double> scores, double eps);

struct DistributionRow {
  std::string dataset;
  std::size_t count = 0;
  double ratio = 0.0;
};

// Rows sorted by ratio descending, then by dataset name.
std::vector<DistributionRow> DistributionReport(
    std::span<const VqaSample> corpus);
std::vector<DistributionRow> DistributionFromCounts(
    const std::map<std::string, std::size_t>& counts);

// Aligned text table with a header and a percentage column.
std::string FormatDistribution(const std::vector<DistributionRow>& rows);

}  // namespace curate
