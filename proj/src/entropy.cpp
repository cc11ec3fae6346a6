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

#include "curate/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace curate {
namespace {

// Grid cell of a coordinate, or -1 when outside [lo, hi]. The upper bound
// belongs to the last cell.
int CellIndex(double v, const AxisBounds& bounds, int cells) {
  const auto& [lo, hi] = bounds;
  if (!(v >= lo && v <= hi)) return -1;
  int i = static_cast<int>(std::floor((v - lo) / (hi - lo) * cells));
  return std::clamp(i, 0, cells - 1);
}

std::optional<long> FlatCell(const Object3D& o, const EntropyConfig& config) {
  if (o.occluded || o.background) return std::nullopt;
  const double coords[3] = {o.center.x, o.center.y, o.center.z};
  long flat = 0;
  for (int axis = 0; axis < 3; ++axis) {
    int c = CellIndex(coords[axis], config.grid_bounds[axis],
                      config.grid_dims[axis]);
    if (c < 0) return std::nullopt;
    flat = flat * config.grid_dims[axis] + c;
  }
  return flat;
}

}  // namespace

std::vector<BlockVariance> DepthBlockVariances(const DepthMap& depth,
                                               const EntropyConfig& config) {
  const std::size_t bs = static_cast<std::size_t>(config.block_size);
  if (bs == 0 || depth.width < bs || depth.height < bs) {
    throw InvalidArgument("depth map " + std::to_string(depth.width) + "x" +
                          std::to_string(depth.height) +
                          " is smaller than one " + std::to_string(bs) + "x" +
                          std::to_string(bs) + " block");
  }
  if (depth.values.size() != depth.width * depth.height) {
    throw InvalidArgument("depth map length does not match its dimensions");
  }
  const std::size_t rows = depth.height / bs;
  const std::size_t cols = depth.width / bs;
  const std::size_t min_valid = (bs * bs + 1) / 2;

  std::vector<BlockVariance> blocks;
  blocks.reserve(rows * cols);
  for (std::size_t br = 0; br < rows; ++br) {
    for (std::size_t bc = 0; bc < cols; ++bc) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = br * bs; r < (br + 1) * bs; ++r) {
        for (std::size_t c = bc * bs; c < (bc + 1) * bs; ++c) {
          const float d = depth.at(r, c);
          if (IsValidDepth(d)) {
            sum += d;
            ++n;
          }
        }
      }
      BlockVariance b;
      b.index = br * cols + bc;
      b.valid_pixels = n;
      b.valid = n >= min_valid;
      if (n > 0) {
        const double mean = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t r = br * bs; r < (br + 1) * bs; ++r) {
          for (std::size_t c = bc * bs; c < (bc + 1) * bs; ++c) {
            const float d = depth.at(r, c);
            if (IsValidDepth(d)) sq += (d - mean) * (d - mean);
          }
        }
        b.variance = sq / static_cast<double>(n);
      }
      blocks.push_back(b);
    }
  }
  return blocks;
}

namespace {

double DepthEntropyFromBlocks(std::span<const BlockVariance> blocks,
                              const EntropyConfig& config) {
  double sum = 0.0;
  std::size_t valid = 0;
  for (const auto& b : blocks) {
    if (!b.valid) continue;
    sum += b.variance;
    ++valid;
  }
  if (valid == 0) throw NoDepthSignal();
  const double mean = sum / static_cast<double>(valid);
  if (mean < config.sigma_min_sq) return 0.0;
  if (mean > config.sigma_max_sq) return 1.0;
  const double h = (mean - config.sigma_min_sq) /
                   (config.sigma_max_sq - config.sigma_min_sq);
  return std::clamp(h, 0.0, 1.0);
}

}  // namespace

double ComputeDepthEntropy(const DepthMap& depth, const EntropyConfig& config) {
  return DepthEntropyFromBlocks(DepthBlockVariances(depth, config), config);
}

std::size_t CountValidObjects(std::span<const Object3D> objects,
                              const EntropyConfig& config) {
  std::size_t m = 0;
  for (const auto& o : objects) {
    if (FlatCell(o, config)) ++m;
  }
  return m;
}

double Compute3dEntropy(std::span<const Object3D> objects,
                        const EntropyConfig& config) {
  const long cells = static_cast<long>(config.grid_dims[0]) *
                     config.grid_dims[1] * config.grid_dims[2];
  if (cells <= 1) return 0.0;

  std::unordered_map<long, std::size_t> counts;
  std::size_t m = 0;
  for (const auto& o : objects) {
    if (auto cell = FlatCell(o, config)) {
      ++counts[*cell];
      ++m;
    }
  }
  if (m == 0) return 0.0;

  // Sum in cell order so the result does not depend on hash iteration order.
  std::vector<std::pair<long, std::size_t>> ordered(counts.begin(),
                                                    counts.end());
  std::sort(ordered.begin(), ordered.end());
  double raw = 0.0;
  for (const auto& [cell, n] : ordered) {
    const double p = static_cast<double>(n) / static_cast<double>(m);
    raw -= p * std::log2(p);
  }
  return std::clamp(raw / std::log2(static_cast<double>(cells)), 0.0, 1.0);
}

EntropyReport ComputeTotalEntropy(const VqaSample& sample,
                                  const DepthMap* depth,
                                  const EntropyConfig& config) {
  EntropyReport report;
  const std::size_t bs = static_cast<std::size_t>(config.block_size);
  if (depth && depth->width >= bs && depth->height >= bs) {
    const auto blocks = DepthBlockVariances(*depth, config);
    report.valid_blocks = static_cast<std::size_t>(std::count_if(
        blocks.begin(), blocks.end(), [](const auto& b) { return b.valid; }));
    if (report.valid_blocks > 0) {
      report.h_depth = DepthEntropyFromBlocks(blocks, config);
    }
  }
  if (sample.objects) {
    report.h_3d = Compute3dEntropy(*sample.objects, config);
    report.object_count = CountValidObjects(*sample.objects, config);
  }
  report.h_total = std::clamp(
      config.alpha * report.h_depth + (1.0 - config.alpha) * report.h_3d, 0.0,
      1.0);
  return report;
}

}  // namespace curate
