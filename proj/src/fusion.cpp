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

#include "curate/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "curate/error.hpp"
#include "curate/rng.hpp"

namespace curate::fusion {
namespace {

std::string Shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void RequireBias(std::span<const double> bias, std::size_t n, const char* what) {
  if (!bias.empty() && bias.size() != n) {
    throw InvalidArgument(std::string(what) + " bias has length " +
                          std::to_string(bias.size()) + ", expected " +
                          std::to_string(n));
  }
}

// Source sample position for output index i under half-pixel centers.
void SourceCoord(std::size_t i, std::size_t src, std::size_t dst,
                 std::size_t* lo, std::size_t* hi, double* frac) {
  double s = (static_cast<double>(i) + 0.5) * static_cast<double>(src) /
                 static_cast<double>(dst) -
             0.5;
  s = std::clamp(s, 0.0, static_cast<double>(src - 1));
  *lo = static_cast<std::size_t>(std::floor(s));
  *hi = std::min(*lo + 1, src - 1);
  *frac = s - static_cast<double>(*lo);
}

std::vector<double> VectorFromJson(const Json& j) {
  const Json& data = RequireField(j, "data");
  if (!data.is_array()) throw DataError("tensor \"data\" must be an array");
  std::vector<double> out;
  out.reserve(data.size());
  for (const Json& v : data) {
    if (!v.is_number()) throw DataError("tensor data must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::size_t> ShapeFromJson(const Json& j) {
  const Json& shape = RequireField(j, "shape");
  if (!shape.is_array()) throw DataError("tensor \"shape\" must be an array");
  std::vector<std::size_t> out;
  for (const Json& v : shape) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw DataError("tensor shape entries must be non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

Json VectorToJson(std::span<const double> v) {
  return {{"shape", Json::array({v.size()})},
          {"data", std::vector<double>(v.begin(), v.end())}};
}

std::vector<double> VectorInput(const Json& inputs, const char* name,
                                bool optional = false) {
  auto it = inputs.find(name);
  if (it == inputs.end()) {
    if (optional) return {};
    throw DataError(std::string("missing input \"") + name + "\"");
  }
  return VectorFromJson(*it);
}

Matrix MatrixInput(const Json& inputs, const char* name) {
  auto it = inputs.find(name);
  if (it == inputs.end()) {
    throw DataError(std::string("missing input \"") + name + "\"");
  }
  return MatrixFromJson(*it);
}

AttentionParams AttentionInputs(const Json& inputs) {
  AttentionParams p;
  p.wq = MatrixInput(inputs, "wq");
  p.wk = MatrixInput(inputs, "wk");
  p.wv = MatrixInput(inputs, "wv");
  p.wo = MatrixInput(inputs, "wo");
  p.bq = VectorInput(inputs, "bq", true);
  p.bk = VectorInput(inputs, "bk", true);
  p.bv = VectorInput(inputs, "bv", true);
  p.bo = VectorInput(inputs, "bo", true);
  return p;
}

std::size_t HeadsParam(const Json& params, std::size_t d_model) {
  if (auto it = params.find("n_heads"); it != params.end() && it->is_number_integer()) {
    return it->get<std::size_t>();
  }
  return FusionDims::HeadsFor(d_model);
}

double NumberParam(const Json& params, const char* name, double fallback) {
  if (auto it = params.find(name); it != params.end() && it->is_number()) {
    return it->get<double>();
  }
  return fallback;
}

std::pair<std::size_t, std::size_t> TargetParam(const Json& params) {
  const Json& t = RequireField(params, "target");
  if (!t.is_array() || t.size() != 2) throw DataError("\"target\" must be [h, w]");
  return {t[0].get<std::size_t>(), t[1].get<std::size_t>()};
}

// Computed outputs of one fixture case, keyed like the case's "expected".
using Outputs = std::map<std::string, std::vector<double>>;

Outputs RunCase(const std::string& op, const Json& inputs, const Json& params) {
  Outputs out;
  if (op == "bilinear_resample") {
    const auto [h, w] = TargetParam(params);
    out["output"] = BilinearResample(GridFromJson(RequireField(inputs, "grid")), h, w).data;
  } else if (op == "rms_norm") {
    out["output"] = RmsNorm(MatrixInput(inputs, "x"), VectorInput(inputs, "gain"),
                            NumberParam(params, "eps", kRmsNormEps))
                        .data();
  } else if (op == "cross_attention") {
    const AttentionParams p = AttentionInputs(inputs);
    const auto r = CrossAttention(MatrixInput(inputs, "q"), MatrixInput(inputs, "kv"), p,
                                  HeadsParam(params, p.wq.rows()));
    out["output"] = r.output.data();
    std::vector<double> weights;
    for (const auto& m : r.weights) weights.insert(weights.end(), m.data().begin(), m.data().end());
    out["attention"] = std::move(weights);
  } else if (op == "fuse_residual") {
    out["output"] = FuseResidual(MatrixInput(inputs, "e2d"), MatrixInput(inputs, "attended")).data();
  } else if (op == "mlp_project") {
    out["output"] = MlpProject(MatrixInput(inputs, "x"), MatrixInput(inputs, "w1"),
                               VectorInput(inputs, "b1", true), MatrixInput(inputs, "w2"),
                               VectorInput(inputs, "b2", true))
                        .data();
  } else if (op == "adapter_forward") {
    AdapterParams p;
    p.gain_pre = VectorInput(inputs, "gain_pre");
    p.w1 = MatrixInput(inputs, "w1");
    p.b1 = VectorInput(inputs, "b1", true);
    p.w2 = MatrixInput(inputs, "w2");
    p.b2 = VectorInput(inputs, "b2", true);
    p.gain_q = VectorInput(inputs, "gain_q");
    p.gain_kv = VectorInput(inputs, "gain_kv");
    p.attention = AttentionInputs(inputs);
    p.eps = NumberParam(params, "eps", kRmsNormEps);
    p.n_heads = HeadsParam(params, p.attention.wq.rows());
    const auto [h, w] = TargetParam(params);
    out["output"] = AdapterForward(MatrixInput(inputs, "e2d"),
                                   GridFromJson(RequireField(inputs, "grid")), h, w, p)
                        .data();
  } else if (op == "eiea_layout") {
    const auto text_len = RequireField(params, "text_len").get<std::int64_t>();
    const auto lens = RequireField(params, "modality_lens").get<std::vector<std::int64_t>>();
    const SequenceLayout layout = BuildEieaLayout(text_len, lens);
    out["total"] = {static_cast<double>(layout.total)};
    const Segment& text = layout.segments.front();
    out["text_span"] = {static_cast<double>(text.start), static_cast<double>(text.length)};
  } else {
    throw DataError("unknown fusion op \"" + op + "\"");
  }
  return out;
}

Matrix RandomMatrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = scale * rng.Normal();
  return m;
}

std::vector<double> RandomVector(Rng& rng, std::size_t n, double scale, double offset = 0.0) {
  std::vector<double> v(n);
  for (double& x : v) x = offset + scale * rng.Normal();
  return v;
}

Json AttentionToJson(const AttentionParams& p) {
  return {{"wq", MatrixToJson(p.wq)}, {"wk", MatrixToJson(p.wk)}, {"wv", MatrixToJson(p.wv)},
          {"wo", MatrixToJson(p.wo)}, {"bq", VectorToJson(p.bq)}, {"bk", VectorToJson(p.bk)},
          {"bv", VectorToJson(p.bv)}, {"bo", VectorToJson(p.bo)}};
}

AttentionParams RandomAttention(Rng& rng, std::size_t d_q, std::size_t d_kv,
                                std::size_t d_model, std::size_t d_out) {
  AttentionParams p;
  p.wq = RandomMatrix(rng, d_model, d_q, 1.0 / std::sqrt(static_cast<double>(d_q)));
  p.wk = RandomMatrix(rng, d_model, d_kv, 1.0 / std::sqrt(static_cast<double>(d_kv)));
  p.wv = RandomMatrix(rng, d_model, d_kv, 1.0 / std::sqrt(static_cast<double>(d_kv)));
  p.wo = RandomMatrix(rng, d_out, d_model, 1.0 / std::sqrt(static_cast<double>(d_model)));
  p.bq = RandomVector(rng, d_model, 0.1);
  p.bk = RandomVector(rng, d_model, 0.1);
  p.bv = RandomVector(rng, d_model, 0.1);
  p.bo = RandomVector(rng, d_out, 0.1);
  return p;
}

Grid RandomGrid(Rng& rng, std::size_t t, std::size_t c, std::size_t h, std::size_t w) {
  Grid g{t, c, h, w, {}};
  g.data = RandomVector(rng, t * c * h * w, 1.0);
  return g;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InvalidArgument("matrix data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (!(d <= worst)) worst = d;  // NaN propagates as a failure
  }
  return worst;
}

Grid BilinearResample(const Grid& grid, std::size_t out_height,
                      std::size_t out_width) {
  if (grid.frames == 0 || grid.channels == 0 || grid.height == 0 ||
      grid.width == 0 || out_height == 0 || out_width == 0) {
    throw InvalidArgument("bilinear_resample requires all dimensions >= 1");
  }
  if (grid.data.size() != grid.frames * grid.channels * grid.height * grid.width) {
    throw InvalidArgument("grid data length does not match its shape");
  }
  Grid out{grid.frames, grid.channels, out_height, out_width, {}};
  out.data.resize(grid.frames * grid.channels * out_height * out_width);

  std::vector<std::size_t> y0(out_height), y1(out_height), x0(out_width), x1(out_width);
  std::vector<double> fy(out_height), fx(out_width);
  for (std::size_t i = 0; i < out_height; ++i) SourceCoord(i, grid.height, out_height, &y0[i], &y1[i], &fy[i]);
  for (std::size_t j = 0; j < out_width; ++j) SourceCoord(j, grid.width, out_width, &x0[j], &x1[j], &fx[j]);

  std::size_t k = 0;
  for (std::size_t t = 0; t < grid.frames; ++t) {
    for (std::size_t c = 0; c < grid.channels; ++c) {
      for (std::size_t i = 0; i < out_height; ++i) {
        for (std::size_t j = 0; j < out_width; ++j) {
          const double top = (1.0 - fx[j]) * grid.at(t, c, y0[i], x0[j]) +
                             fx[j] * grid.at(t, c, y0[i], x1[j]);
          const double bottom = (1.0 - fx[j]) * grid.at(t, c, y1[i], x0[j]) +
                                fx[j] * grid.at(t, c, y1[i], x1[j]);
          out.data[k++] = (1.0 - fy[i]) * top + fy[i] * bottom;
        }
      }
    }
  }
  return out;
}

Matrix GridToTokens(const Grid& grid) {
  Matrix m(grid.frames * grid.height * grid.width, grid.channels);
  for (std::size_t t = 0; t < grid.frames; ++t) {
    for (std::size_t y = 0; y < grid.height; ++y) {
      for (std::size_t x = 0; x < grid.width; ++x) {
        const std::size_t row = (t * grid.height + y) * grid.width + x;
        for (std::size_t c = 0; c < grid.channels; ++c) m(row, c) = grid.at(t, c, y, x);
      }
    }
  }
  return m;
}

Matrix RmsNorm(const Matrix& x, std::span<const double> gain, double eps) {
  if (gain.size() != x.cols()) {
    throw InvalidArgument("rms_norm gain length " + std::to_string(gain.size()) +
                          " does not match feature dimension " +
                          std::to_string(x.cols()));
  }
  Matrix y(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double ms = 0.0;
    for (double v : x.row(r)) ms += v * v;
    ms /= static_cast<double>(x.cols());
    const double denom = std::sqrt(ms + eps);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      // A zero row stays zero even when eps is 0.
      y(r, c) = denom > 0.0 ? x(r, c) / denom * gain[c] : 0.0;
    }
  }
  return y;
}

double Gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

Matrix Linear(const Matrix& x, const Matrix& weight, std::span<const double> bias) {
  if (weight.cols() != x.cols()) {
    throw InvalidArgument("linear: input " + Shape(x) + " does not chain into weight " +
                          Shape(weight));
  }
  RequireBias(bias, weight.rows(), "linear");
  Matrix y(x.rows(), weight.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    for (std::size_t o = 0; o < weight.rows(); ++o) {
      const auto wr = weight.row(o);
      double s = bias.empty() ? 0.0 : bias[o];
      for (std::size_t i = 0; i < xr.size(); ++i) s += xr[i] * wr[i];
      y(r, o) = s;
    }
  }
  return y;
}

Matrix MlpProject(const Matrix& x, const Matrix& w1, std::span<const double> b1,
                  const Matrix& w2, std::span<const double> b2) {
  if (w2.cols() != w1.rows()) {
    throw InvalidArgument("mlp: hidden weight " + Shape(w1) +
                          " does not chain into output weight " + Shape(w2));
  }
  Matrix hidden = Linear(x, w1, b1);
  for (double& v : hidden.data()) v = Gelu(v);
  return Linear(hidden, w2, b2);
}

AttentionResult CrossAttention(const Matrix& queries, const Matrix& kv,
                               const AttentionParams& params,
                               std::size_t n_heads) {
  const std::size_t d_model = params.wq.rows();
  if (params.wk.rows() != d_model || params.wv.rows() != d_model ||
      params.wo.cols() != d_model) {
    throw InvalidArgument("attention projections disagree on d_model");
  }
  if (n_heads == 0 || d_model % n_heads != 0) {
    throw InvalidArgument("n_heads " + std::to_string(n_heads) +
                          " must divide d_model " + std::to_string(d_model));
  }
  if (kv.rows() == 0) throw InvalidArgument("attention needs at least one key");

  const Matrix q = Linear(queries, params.wq, params.bq);
  const Matrix k = Linear(kv, params.wk, params.bk);
  const Matrix v = Linear(kv, params.wv, params.bv);
  const std::size_t dh = d_model / n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  AttentionResult result;
  Matrix concat(queries.rows(), d_model);
  std::vector<double> logits(kv.rows());
  for (std::size_t h = 0; h < n_heads; ++h) {
    Matrix weights(queries.rows(), kv.rows());
    const std::size_t off = h * dh;
    for (std::size_t i = 0; i < queries.rows(); ++i) {
      double peak = -INFINITY;
      for (std::size_t j = 0; j < kv.rows(); ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < dh; ++c) s += q(i, off + c) * k(j, off + c);
        logits[j] = s * scale;
        peak = std::max(peak, logits[j]);
      }
      double z = 0.0;
      for (std::size_t j = 0; j < kv.rows(); ++j) {
        logits[j] = std::exp(logits[j] - peak);
        z += logits[j];
      }
      for (std::size_t j = 0; j < kv.rows(); ++j) weights(i, j) = logits[j] / z;
      for (std::size_t c = 0; c < dh; ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < kv.rows(); ++j) s += weights(i, j) * v(j, off + c);
        concat(i, off + c) = s;
      }
    }
    result.weights.push_back(std::move(weights));
  }
  result.output = Linear(concat, params.wo, params.bo);
  return result;
}

Matrix FuseResidual(const Matrix& e_2d, const Matrix& attended) {
  if (e_2d.rows() != attended.rows() || e_2d.cols() != attended.cols()) {
    throw InvalidArgument("fuse_residual shape mismatch: " + Shape(e_2d) + " vs " +
                          Shape(attended));
  }
  Matrix out = e_2d;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += attended.data()[i];
  return out;
}

Matrix AdapterForward(const Matrix& e_2d, const Grid& geometry,
                      std::size_t out_height, std::size_t out_width,
                      const AdapterParams& params) {
  const Matrix tokens = GridToTokens(BilinearResample(geometry, out_height, out_width));
  if (tokens.rows() != e_2d.rows()) {
    throw InvalidArgument("resampled geometry has " + std::to_string(tokens.rows()) +
                          " tokens, 2D stream has " + std::to_string(e_2d.rows()));
  }
  const Matrix projected = MlpProject(RmsNorm(tokens, params.gain_pre, params.eps),
                                      params.w1, params.b1, params.w2, params.b2);
  const Matrix q = RmsNorm(e_2d, params.gain_q, params.eps);
  const Matrix kv = RmsNorm(projected, params.gain_kv, params.eps);
  const std::size_t heads =
      params.n_heads ? params.n_heads : FusionDims::HeadsFor(params.attention.wq.rows());
  return FuseResidual(e_2d, CrossAttention(q, kv, params.attention, heads).output);
}

std::string_view ToString(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::kText: return "text";
    case SegmentKind::kLatent: return "latent";
    case SegmentKind::kPhyMarker: return "<PHY>";
    case SegmentKind::kModMarker: return "<MOD>";
    case SegmentKind::kModality: return "modality";
  }
  return "text";
}

SequenceLayout BuildEieaLayout(std::int64_t text_len,
                               std::span<const std::int64_t> modality_lens) {
  if (text_len < 1) throw InvalidArgument("text_len must be >= 1");
  for (auto len : modality_lens) {
    if (len < 0) throw InvalidArgument("modality lengths must be >= 0");
  }
  SequenceLayout layout;
  auto push = [&](SegmentKind kind, std::size_t length, std::size_t modality = 0) {
    layout.segments.push_back({kind, layout.total, length, modality});
    layout.total += length;
  };
  push(SegmentKind::kText, static_cast<std::size_t>(text_len));
  push(SegmentKind::kLatent, kLatentTokens);
  push(SegmentKind::kPhyMarker, 1);
  for (std::size_t m = 0; m < modality_lens.size(); ++m) {
    if (m > 0) push(SegmentKind::kModMarker, 1);
    push(SegmentKind::kModality, static_cast<std::size_t>(modality_lens[m]), m);
  }
  return layout;
}

bool LayoutIsValid(const SequenceLayout& layout, std::size_t modality_count) {
  std::size_t cursor = 0;
  std::size_t phy = 0, mod = 0, latent = 0, modalities = 0;
  SegmentKind prev = SegmentKind::kPhyMarker;
  for (std::size_t i = 0; i < layout.segments.size(); ++i) {
    const Segment& s = layout.segments[i];
    if (s.start != cursor) return false;
    cursor += s.length;
    switch (s.kind) {
      case SegmentKind::kText:
        if (i != 0) return false;
        break;
      case SegmentKind::kLatent: latent += s.length; break;
      case SegmentKind::kPhyMarker: ++phy; if (s.length != 1) return false; break;
      case SegmentKind::kModMarker:
        ++mod;
        if (s.length != 1 || prev != SegmentKind::kModality) return false;
        break;
      case SegmentKind::kModality:
        if (modalities > 0 && prev != SegmentKind::kModMarker) return false;
        ++modalities;
        break;
    }
    prev = s.kind;
  }
  return cursor == layout.total && phy == 1 && latent == kLatentTokens &&
         modalities == modality_count &&
         mod == (modality_count > 0 ? modality_count - 1 : 0);
}

Matrix ExtractText(const Matrix& sequence, const SequenceLayout& layout) {
  if (sequence.rows() != layout.total) {
    throw InvalidArgument("sequence has " + std::to_string(sequence.rows()) +
                          " rows, layout expects " + std::to_string(layout.total));
  }
  const Segment& text = layout.segments.front();
  Matrix out(text.length, sequence.cols());
  for (std::size_t r = 0; r < text.length; ++r) {
    for (std::size_t c = 0; c < sequence.cols(); ++c) out(r, c) = sequence(text.start + r, c);
  }
  return out;
}

bool VerifyReport::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const auto& c) { return c.pass; });
}

VerifyReport VerifyFixture(const Json& fixture) {
  VerifyReport report;
  if (!fixture.is_object()) throw DataError("fusion fixture must be a JSON object");
  report.tolerance = NumberParam(fixture, "tolerance", 1e-6);
  const Json& cases = RequireField(fixture, "cases");
  if (!cases.is_array()) throw DataError("\"cases\" must be an array");
  std::size_t index = 0;
  for (const Json& c : cases) {
    CaseResult r;
    r.name = c.value("name", "case" + std::to_string(index));
    r.op = c.value("op", "");
    ++index;
    try {
      const Json empty = Json::object();
      const Json& inputs = c.contains("inputs") ? c["inputs"] : empty;
      const Json& params = c.contains("params") ? c["params"] : empty;
      const Outputs got = RunCase(r.op, inputs, params);
      const Json& expected = RequireField(c, "expected");
      if (!expected.is_object() || expected.empty()) {
        throw DataError("\"expected\" must be a nonempty object");
      }
      for (const auto& [key, value] : expected.items()) {
        auto it = got.find(key);
        if (it == got.end()) throw DataError("op does not produce \"" + key + "\"");
        r.max_abs_diff = std::max(r.max_abs_diff, MaxAbsDiff(it->second, VectorFromJson(value)));
      }
      r.pass = r.max_abs_diff <= report.tolerance;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.max_abs_diff = INFINITY;
      r.pass = false;
    }
    report.cases.push_back(std::move(r));
  }
  return report;
}

Json GenerateFixture(std::uint64_t seed) {
  Rng rng(seed);
  Json cases = Json::array();
  auto add = [&](std::string name, std::string op, Json inputs, Json params) {
    const Outputs out = RunCase(op, inputs, params);
    Json expected = Json::object();
    for (const auto& [key, values] : out) {
      expected[key] = VectorToJson(values);
    }
    cases.push_back({{"name", std::move(name)},
                     {"op", std::move(op)},
                     {"inputs", std::move(inputs)},
                     {"params", std::move(params)},
                     {"expected", std::move(expected)}});
  };

  const Grid grid = RandomGrid(rng, 2, 3, 5, 5);
  add("resample_up", "bilinear_resample", {{"grid", GridToJson(grid)}}, {{"target", {9, 9}}});
  add("resample_down", "bilinear_resample", {{"grid", GridToJson(grid)}}, {{"target", {3, 2}}});

  const Matrix x = RandomMatrix(rng, 4, 16, 2.0);
  add("rms_norm", "rms_norm",
      {{"x", MatrixToJson(x)}, {"gain", VectorToJson(RandomVector(rng, 16, 0.1, 1.0))}},
      {{"eps", kRmsNormEps}});

  const Matrix w1 = RandomMatrix(rng, 12, 16, 0.25);
  const Matrix w2 = RandomMatrix(rng, 8, 12, 0.3);
  add("mlp_project", "mlp_project",
      {{"x", MatrixToJson(x)}, {"w1", MatrixToJson(w1)},
       {"b1", VectorToJson(RandomVector(rng, 12, 0.1))}, {"w2", MatrixToJson(w2)},
       {"b2", VectorToJson(RandomVector(rng, 8, 0.1))}},
      Json::object());

  const Matrix q = RandomMatrix(rng, 3, 8, 1.0);
  const Matrix kv = RandomMatrix(rng, 5, 6, 1.0);
  Json attn = AttentionToJson(RandomAttention(rng, 8, 6, 8, 8));
  attn["q"] = MatrixToJson(q);
  attn["kv"] = MatrixToJson(kv);
  add("cross_attention", "cross_attention", attn, {{"n_heads", 2}});

  const Matrix e2d = RandomMatrix(rng, 3, 8, 1.0);
  add("fuse_residual", "fuse_residual",
      {{"e2d", MatrixToJson(e2d)}, {"attended", MatrixToJson(RandomMatrix(rng, 3, 8, 1.0))}},
      Json::object());

  // 2 frames of a 3-channel 5x5 grid resampled to 2x3: 12 tokens.
  const Matrix e2d_tokens = RandomMatrix(rng, 12, 8, 1.0);
  Json adapter = AttentionToJson(RandomAttention(rng, 8, 8, 8, 8));
  adapter["e2d"] = MatrixToJson(e2d_tokens);
  adapter["grid"] = GridToJson(grid);
  adapter["gain_pre"] = VectorToJson(RandomVector(rng, 3, 0.1, 1.0));
  adapter["w1"] = MatrixToJson(RandomMatrix(rng, 16, 3, 0.5));
  adapter["b1"] = VectorToJson(RandomVector(rng, 16, 0.1));
  adapter["w2"] = MatrixToJson(RandomMatrix(rng, 8, 16, 0.25));
  adapter["b2"] = VectorToJson(RandomVector(rng, 8, 0.1));
  adapter["gain_q"] = VectorToJson(RandomVector(rng, 8, 0.1, 1.0));
  adapter["gain_kv"] = VectorToJson(RandomVector(rng, 8, 0.1, 1.0));
  add("adapter_forward", "adapter_forward", adapter,
      {{"target", {2, 3}}, {"eps", kRmsNormEps}, {"n_heads", 1}});

  add("eiea_layout", "eiea_layout", Json::object(),
      {{"text_len", 5}, {"modality_lens", {3, 4}}});

  return {{"tolerance", 1e-9}, {"seed", seed}, {"cases", std::move(cases)}};
}

Json MatrixToJson(const Matrix& m) {
  return {{"shape", {m.rows(), m.cols()}}, {"data", m.data()}};
}

Matrix MatrixFromJson(const Json& j) {
  const auto shape = ShapeFromJson(j);
  if (shape.size() != 2) throw DataError("matrix shape must have 2 entries");
  auto data = VectorFromJson(j);
  if (data.size() != shape[0] * shape[1]) {
    throw DataError("matrix data length does not match its shape");
  }
  return Matrix(shape[0], shape[1], std::move(data));
}

Json GridToJson(const Grid& g) {
  return {{"shape", {g.frames, g.channels, g.height, g.width}}, {"data", g.data}};
}

Grid GridFromJson(const Json& j) {
  const auto shape = ShapeFromJson(j);
  if (shape.size() != 4) throw DataError("grid shape must be [T, C, H, W]");
  Grid g{shape[0], shape[1], shape[2], shape[3], VectorFromJson(j)};
  if (g.data.size() != g.frames * g.channels * g.height * g.width) {
    throw DataError("grid data length does not match its shape");
  }
  return g;
}

}  // namespace curate::fusion
