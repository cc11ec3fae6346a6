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

#include "curate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "curate/error.hpp"

namespace curate {

NormalizedScores NormalizeScores(std::span<const double> scores, double eps) {
  if (scores.empty()) throw InvalidArgument("cannot normalize an empty score list");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be > 0");
  NormalizedScores out;
  double peak = -INFINITY;
  for (double y : scores) {
    if (!std::isfinite(y)) throw InvalidArgument("scores must be finite");
    peak = std::max(peak, y);
    if (y < 0.0) out.negative_input = true;
  }
  out.values.reserve(scores.size());
  for (double y : scores) out.values.push_back(y / (peak + eps));
  return out;
}

std::vector<DistributionRow> DistributionFromCounts(
    const std::map<std::string, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [name, n] : counts) total += n;
  std::vector<DistributionRow> rows;
  if (total == 0) return rows;
  for (const auto& [name, n] : counts) {
    rows.push_back({name, n, static_cast<double>(n) / static_cast<double>(total)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.count > b.count;
  });
  return rows;
}

std::vector<DistributionRow> DistributionReport(
    std::span<const VqaSample> corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : corpus) ++counts[s.dataset_name];
  return DistributionFromCounts(counts);
}

std::string FormatDistribution(const std::vector<DistributionRow>& rows) {
  std::size_t name_width = 7;  // "dataset"
  for (const auto& r : rows) name_width = std::max(name_width, r.dataset.size());
  std::string out;
  char line[512];
  std::snprintf(line, sizeof(line), "%-*s %10s %8s\n", static_cast<int>(name_width),
                "dataset", "count", "ratio");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-*s %10zu %7.2f%%\n",
                  static_cast<int>(name_width), r.dataset.c_str(), r.count,
                  r.ratio * 100.0);
    out += line;
  }
  return out;
}

}  // namespace curate
