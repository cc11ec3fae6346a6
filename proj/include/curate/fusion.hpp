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

// Reference forward math for the geometry adapter (grid interpolation,
// RMSNorm, two-layer GELU MLP, multi-head cross-attention with a residual
// path) and for the physical-cue interpreter's token layout.
//
// Everything here is forward-only double precision with weights passed in,
// so a neural implementation can be checked token for token. Linear layers
// follow the y = x W^T + b convention with W shaped (out, in).

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curate/records.hpp"
#include "curate/types.hpp"

namespace curate::fusion {

// Reference model dimensions. Signatures are dimension-generic; these are
// only used to document and size checks against the reference model.
inline constexpr std::size_t kSemanticDim = 8192;    // 2D token width
inline constexpr std::size_t kGeometryDim = 1024;    // 3D token width
inline constexpr std::size_t kGeometryGrid = 37;     // 37 x 37 patch grid
inline constexpr std::size_t kGeometryTokens = 1369;
inline constexpr std::size_t kHeadDim = 128;
inline constexpr std::size_t kInterpreterDim = 1024;
inline constexpr std::size_t kBoxTokens = 100;
inline constexpr std::size_t kLatentTokens = 10;
inline constexpr std::size_t kCompactTokens = 64;
inline constexpr std::size_t kCompactReduction = 8;
inline constexpr double kRmsNormEps = 1e-6;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// T x C x H x W feature grid, row-major in that order.
struct Grid {
  std::size_t frames = 0;
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  double at(std::size_t t, std::size_t c, std::size_t y, std::size_t x) const {
    return data[((t * channels + c) * height + y) * width + x];
  }
  bool operator==(const Grid&) const = default;
};

double MaxAbsDiff(std::span<const double> a, std::span<const double> b);

// Bilinear resampling with half-pixel centers (align_corners = false):
// source coordinate = (i + 0.5) * src / dst - 0.5, clamped to [0, src - 1].
Grid BilinearResample(const Grid& grid, std::size_t out_height,
                      std::size_t out_width);

// Flattens a grid into tokens: one row per (frame, y, x), one column per
// channel.
Matrix GridToTokens(const Grid& grid);

// y = x / sqrt(mean(x^2) + eps) * gain, per row.
Matrix RmsNorm(const Matrix& x, std::span<const double> gain,
               double eps = kRmsNormEps);

// Exact GELU: 0.5 x (1 + erf(x / sqrt(2))).
double Gelu(double x);

// x W^T + b. An empty bias means zero.
Matrix Linear(const Matrix& x, const Matrix& weight,
              std::span<const double> bias = {});

// w2 . gelu(w1 . x + b1) + b2, per row.
Matrix MlpProject(const Matrix& x, const Matrix& w1, std::span<const double> b1,
                  const Matrix& w2, std::span<const double> b2);

struct AttentionParams {
  Matrix wq, wk, wv, wo;             // (d_model, d_q), (d_model, d_kv) x2, (d_out, d_model)
  std::vector<double> bq, bk, bv, bo;  // optional
};

struct AttentionResult {
  Matrix output;                  // n_queries x d_out
  std::vector<Matrix> weights;    // per head, n_queries x n_kv, rows sum to 1
};

// Multi-head scaled dot-product attention: per head softmax(Q K^T / sqrt(d_h))
// V, heads concatenated, then output-projected. n_heads must divide d_model.
AttentionResult CrossAttention(const Matrix& queries, const Matrix& kv,
                               const AttentionParams& params,
                               std::size_t n_heads);

// e_2d + attended, elementwise.
Matrix FuseResidual(const Matrix& e_2d, const Matrix& attended);

struct AdapterParams {
  std::vector<double> gain_pre;  // RMSNorm before the projection MLP
  Matrix w1, w2;
  std::vector<double> b1, b2;
  std::vector<double> gain_q;    // RMSNorm on the 2D queries
  std::vector<double> gain_kv;   // RMSNorm on the projected 3D tokens
  AttentionParams attention;
  std::size_t n_heads = 0;       // 0: one head per kHeadDim channels
  double eps = kRmsNormEps;
};

// Full geometry-injection path: resample the 3D grid to (out_height,
// out_width), flatten to tokens, RMSNorm + MLP to the 2D width, then
// e_2d + CrossAttn(RMSNorm(e_2d), RMSNorm(projected)).
Matrix AdapterForward(const Matrix& e_2d, const Grid& geometry,
                      std::size_t out_height, std::size_t out_width,
                      const AdapterParams& params);

enum class SegmentKind { kText, kLatent, kPhyMarker, kModMarker, kModality };

std::string_view ToString(SegmentKind kind);

struct Segment {
  SegmentKind kind = SegmentKind::kText;
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t modality = 0;  // index into the modality list for kModality
};

struct SequenceLayout {
  std::vector<Segment> segments;
  std::size_t total = 0;
};

// text, kLatentTokens latent slots, the <PHY> marker, then the modality spans
// separated by <MOD> markers. Throws InvalidArgument for text_len < 1 or a
// negative modality length.
SequenceLayout BuildEieaLayout(std::int64_t text_len,
                               std::span<const std::int64_t> modality_lens);

// True when the layout satisfies every structural invariant.
bool LayoutIsValid(const SequenceLayout& layout, std::size_t modality_count);

// Rows of `sequence` at the text positions (exactly text_len of them).
Matrix ExtractText(const Matrix& sequence, const SequenceLayout& layout);

struct CaseResult {
  std::string name;
  std::string op;
  double max_abs_diff = 0.0;
  bool pass = false;
  std::string error;
};

struct VerifyReport {
  double tolerance = 1e-6;
  std::vector<CaseResult> cases;
  bool pass() const;
};

// Recomputes each case in a fixture and diffs it against the stored
// expectation. See README for the fixture schema.
VerifyReport VerifyFixture(const Json& fixture);

// A fixture covering every op with seeded random inputs and the expected
// values computed by this module.
Json GenerateFixture(std::uint64_t seed);

Json MatrixToJson(const Matrix& m);
Matrix MatrixFromJson(const Json& j);
Json GridToJson(const Grid& g);
Grid GridFromJson(const Json& j);

}  // namespace curate::fusion
