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

// Naive reference implementations used to cross-check the library. They are
// written directly from the definitions, share no code with src/, and favor
// obviousness over speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace oracle {

// Mean of per-block population variances over blocks with at least half
// valid pixels, min-max normalized and clamped. Returns -1 when no block is
// valid.
inline double DepthEntropy(const std::vector<float>& d, int width, int height,
                           int block, double lo, double hi) {
  double sum = 0.0;
  int valid_blocks = 0;
  for (int by = 0; by + block <= height; by += block) {
    for (int bx = 0; bx + block <= width; bx += block) {
      std::vector<double> px;
      for (int y = by; y < by + block; ++y) {
        for (int x = bx; x < bx + block; ++x) {
          const float v = d[y * width + x];
          if (std::isfinite(v) && v > 0.0f) px.push_back(v);
        }
      }
      if (2 * static_cast<int>(px.size()) < block * block) continue;
      double mean = 0.0;
      for (double v : px) mean += v;
      mean /= static_cast<double>(px.size());
      double var = 0.0;
      for (double v : px) var += (v - mean) * (v - mean);
      var /= static_cast<double>(px.size());
      sum += var;
      ++valid_blocks;
    }
  }
  if (valid_blocks == 0) return -1.0;
  const double mean_var = sum / valid_blocks;
  if (mean_var <= lo) return 0.0;
  if (mean_var >= hi) return 1.0;
  return (mean_var - lo) / (hi - lo);
}

struct Obj {
  double x, y, z;
  bool occluded = false;
  bool background = false;
};

// Shannon entropy of cell occupancy, normalized by log2 of the cell count.
inline double Entropy3d(const std::vector<Obj>& objects, int nx, int ny, int nz,
                        double x0, double x1, double y0, double y1, double z0,
                        double z1) {
  std::map<std::tuple<int, int, int>, int> cells;
  int m = 0;
  auto cell = [](double v, double lo, double hi, int n) {
    int c = static_cast<int>(std::floor((v - lo) / (hi - lo) * n));
    return std::min(std::max(c, 0), n - 1);
  };
  for (const auto& o : objects) {
    if (o.occluded || o.background) continue;
    if (o.x < x0 || o.x > x1 || o.y < y0 || o.y > y1 || o.z < z0 || o.z > z1) continue;
    ++cells[{cell(o.x, x0, x1, nx), cell(o.y, y0, y1, ny), cell(o.z, z0, z1, nz)}];
    ++m;
  }
  if (m == 0) return 0.0;
  double h = 0.0;
  for (const auto& [k, n] : cells) {
    const double p = static_cast<double>(n) / m;
    h -= p * std::log2(p);
  }
  return h / std::log2(static_cast<double>(nx * ny * nz));
}

// IoU of integer boxes by counting covered unit cells.
inline double GridIou(int ax0, int ay0, int ax1, int ay1, int bx0, int by0, int bx1,
                      int by1) {
  const int lo_x = std::min(ax0, bx0), hi_x = std::max(ax1, bx1);
  const int lo_y = std::min(ay0, by0), hi_y = std::max(ay1, by1);
  long inter = 0, uni = 0;
  for (int y = lo_y; y < hi_y; ++y) {
    for (int x = lo_x; x < hi_x; ++x) {
      const bool in_a = x >= ax0 && x < ax1 && y >= ay0 && y < ay1;
      const bool in_b = x >= bx0 && x < bx1 && y >= by0 && y < by1;
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Bilinear sample of a single-channel h x w field at output pixel (oy, ox) of
// an (oh x ow) target, half-pixel centers, clamped.
inline double Bilinear(const std::vector<double>& f, int h, int w, int oh, int ow,
                       int oy, int ox) {
  double sy = (oy + 0.5) * h / oh - 0.5;
  double sx = (ox + 0.5) * w / ow - 0.5;
  sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
  sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x0 = static_cast<int>(std::floor(sx));
  const int y1 = std::min(y0 + 1, h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const double wy = sy - y0, wx = sx - x0;
  return (1 - wy) * (1 - wx) * f[y0 * w + x0] + (1 - wy) * wx * f[y0 * w + x1] +
         wy * (1 - wx) * f[y1 * w + x0] + wy * wx * f[y1 * w + x1];
}

// Single-head attention softmax(q k^T / sqrt(d)) v with identity projections.
inline std::vector<std::vector<double>> Attention(
    const std::vector<std::vector<double>>& q, const std::vector<std::vector<double>>& k,
    const std::vector<std::vector<double>>& v) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(q[0].size()));
  std::vector<std::vector<double>> out;
  for (const auto& qi : q) {
    std::vector<double> logits;
    for (const auto& kj : k) {
      double dot = 0.0;
      for (std::size_t c = 0; c < qi.size(); ++c) dot += qi[c] * kj[c];
      logits.push_back(dot * scale);
    }
    const double peak = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double& l : logits) z += (l = std::exp(l - peak));
    std::vector<double> row(v[0].size(), 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
      for (std::size_t c = 0; c < row.size(); ++c) row[c] += logits[j] / z * v[j][c];
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace oracle
