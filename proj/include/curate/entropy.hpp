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

// Spatial entropy scoring: a scene-complexity score in [0,1] that fuses the
// mean local depth variance of a depth map with the Shannon entropy of the
// 3D object layout.
//
//   H_total = alpha * H_depth + (1 - alpha) * H_3d
//
// H_depth splits the map into non-overlapping block_size x block_size tiles
// (remainder rows and columns are dropped), takes the population variance of
// the valid pixels of each tile, averages over valid tiles and min-max
// normalizes the mean into [sigma_min_sq, sigma_max_sq], clamping outside.
//
// H_3d bins the centers of non-occluded, non-background objects that fall
// inside grid_bounds into nx * ny * nz equal cells and divides the Shannon
// entropy (bits) of the occupancy distribution by log2(cells).

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "curate/error.hpp"
#include "curate/types.hpp"

namespace curate {

// Raised when a depth map has no tile with enough valid pixels.
class NoDepthSignal : public Error {
 public:
  NoDepthSignal() : Error(ErrorKind::kData, "no-depth-signal") {}
};

struct BlockVariance {
  std::size_t index = 0;  // row-major tile index
  double variance = 0.0;  // m^2, population variance over valid pixels
  std::size_t valid_pixels = 0;
  bool valid = false;  // at least half the tile's pixels are valid
};

// A pixel is valid when it is finite and strictly positive.
inline bool IsValidDepth(float d) { return d > 0.0f && d <= 3.4e38f; }

// Throws InvalidArgument when the map is smaller than one tile.
std::vector<BlockVariance> DepthBlockVariances(const DepthMap& depth,
                                               const EntropyConfig& config);

// Normalized depth entropy in [0,1]. Throws NoDepthSignal when no tile is
// valid.
double ComputeDepthEntropy(const DepthMap& depth, const EntropyConfig& config);

// Objects that contribute to the 3D entropy: visible, foreground, in bounds.
std::size_t CountValidObjects(std::span<const Object3D> objects,
                              const EntropyConfig& config);

// Normalized 3D object distribution entropy in [0,1]; 0 for empty scenes.
double Compute3dEntropy(std::span<const Object3D> objects,
                        const EntropyConfig& config);

// Fused score. A missing depth map (or one with no valid tile) contributes
// h_depth = 0 and a missing object list contributes h_3d = 0.
EntropyReport ComputeTotalEntropy(const VqaSample& sample,
                                  const DepthMap* depth,
                                  const EntropyConfig& config);

}  // namespace curate
