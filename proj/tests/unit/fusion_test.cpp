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

#include <cmath>
#include <numeric>
#include <set>

#include "../common/oracles.hpp"
#include "curate/error.hpp"
#include "curate/fusion.hpp"
#include "curate/rng.hpp"
#include "doctest.h"

using namespace curate;
using namespace curate::fusion;

namespace {

Matrix Random(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (auto& v : m.data()) v = rng.Uniform(-1, 1);
  return m;
}

Grid RandomGrid(std::size_t t, std::size_t c, std::size_t h, std::size_t w, Rng& rng) {
  Grid g{t, c, h, w, std::vector<double>(t * c * h * w)};
  for (auto& v : g.data) v = rng.Uniform(-2, 2);
  return g;
}

AttentionParams Identity(std::size_t d) {
  return {Matrix::Identity(d), Matrix::Identity(d), Matrix::Identity(d), Matrix::Identity(d),
          {}, {}, {}, {}};
}

std::vector<std::vector<double>> Rows(const Matrix& m) {
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
  return out;
}

}  // namespace

TEST_CASE("bilinear resample") {
  Rng rng(1);
  SUBCASE("same size is exact identity") {
    const Grid g = RandomGrid(2, 3, 5, 7, rng);
    CHECK(BilinearResample(g, 5, 7) == g);
  }
  SUBCASE("constant field stays constant") {
    Grid g{1, 1, 4, 4, std::vector<double>(16, 2.5)};
    for (double v : BilinearResample(g, 9, 3).data) CHECK(v == doctest::Approx(2.5));
  }
  SUBCASE("1x1 source broadcasts") {
    Grid g{1, 2, 1, 1, {3.0, -1.0}};
    const Grid out = BilinearResample(g, 6, 4);
    for (std::size_t y = 0; y < 6; ++y)
      for (std::size_t x = 0; x < 4; ++x) {
        CHECK(out.at(0, 0, y, x) == 3.0);
        CHECK(out.at(0, 1, y, x) == -1.0);
      }
  }
  SUBCASE("matches the direct formula") {
    for (int trial = 0; trial < 20; ++trial) {
      const Grid g = RandomGrid(1, 1, 5, 5, rng);
      const Grid out = BilinearResample(g, 9, 9);
      for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x)
          CHECK(std::abs(out.at(0, 0, y, x) - oracle::Bilinear(g.data, 5, 5, 9, 9, y, x)) <= 1e-6);
    }
  }
  SUBCASE("affine fields are preserved in the interior") {
    Grid g{1, 1, 5, 5, std::vector<double>(25)};
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) g.data[y * 5 + x] = 0.7 * x - 1.3 * y + 2.0;
    const Grid out = BilinearResample(g, 9, 9);
    for (int y = 0; y < 9; ++y)
      for (int x = 0; x < 9; ++x) {
        const double sy = (y + 0.5) * 5 / 9 - 0.5, sx = (x + 0.5) * 5 / 9 - 0.5;
        if (sy < 0 || sx < 0 || sy > 4 || sx > 4) continue;
        CHECK(std::abs(out.at(0, 0, y, x) - (0.7 * sx - 1.3 * sy + 2.0)) <= 1e-6);
      }
  }
  SUBCASE("tokens are frame-major, then row, then column") {
    const Grid g = RandomGrid(2, 3, 2, 2, rng);
    const Matrix t = GridToTokens(g);
    CHECK(t.rows() == 8);
    CHECK(t.cols() == 3);
    CHECK(t(5, 2) == g.at(1, 2, 0, 1));
  }
}

TEST_CASE("rms norm") {
  Matrix x(2, 4, 3.0);
  for (std::size_t c = 0; c < 4; ++c) x(1, c) = 0.0;
  const std::vector<double> gain(4, 1.0);
  const Matrix y = RmsNorm(x, gain, 1e-300);
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(y(0, c) == doctest::Approx(1.0));
    CHECK(y(1, c) == 0.0);
  }
  Rng rng(2);
  const Matrix r = Random(5, 16, rng);
  Matrix scaled = r;
  for (auto& v : scaled.data()) v *= 7.5;
  CHECK(MaxAbsDiff(RmsNorm(r, std::vector<double>(16, 1.0), 0.0).data(),
                   RmsNorm(scaled, std::vector<double>(16, 1.0), 0.0).data()) <= 1e-12);
  const Matrix n = RmsNorm(scaled, std::vector<double>(16, 1.0));
  for (std::size_t i = 0; i < 5; ++i) {
    double ss = 0.0;
    for (double v : n.row(i)) ss += v * v;
    CHECK(std::abs(std::sqrt(ss / 16) - 1.0) <= 1e-6);
  }
  CHECK_THROWS_AS(RmsNorm(r, std::vector<double>(3, 1.0)), Error);
}

TEST_CASE("gelu and mlp") {
  CHECK(Gelu(0.0) == 0.0);
  CHECK(Gelu(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(std::abs(Gelu(-40.0)) < 1e-12);
  const Matrix one(1, 1, 1.0);
  const Matrix eye = Matrix::Identity(1);
  CHECK(MlpProject(one, eye, {}, eye, {})(0, 0) == doctest::Approx(0.8413447460685429));
  Matrix zero(3, 4, 0.0);
  Rng rng(4);
  const Matrix out = MlpProject(zero, Random(6, 4, rng), std::vector<double>(6, 0.0),
                                Random(2, 6, rng), std::vector<double>(2, 0.0));
  for (double v : out.data()) CHECK(v == 0.0);
  CHECK_THROWS_AS(MlpProject(zero, Random(6, 5, rng), {}, Random(2, 6, rng), {}), Error);
}

TEST_CASE("cross attention") {
  Rng rng(5);
  SUBCASE("a single kv pair is returned for every query") {
    const Matrix q = Random(3, 8, rng);
    const Matrix kv = Random(1, 8, rng);
    const auto r = CrossAttention(q, kv, Identity(8), 1);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t c = 0; c < 8; ++c) CHECK(r.output(i, c) == doctest::Approx(kv(0, c)));
  }
  SUBCASE("duplicated kv rows change nothing") {
    const Matrix q = Random(3, 8, rng);
    const Matrix kv = Random(4, 8, rng);
    Matrix doubled(8, 8);
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) doubled(r, c) = kv(r % 4, c);
    const auto a = CrossAttention(q, kv, Identity(8), 2);
    const auto b = CrossAttention(q, doubled, Identity(8), 2);
    CHECK(MaxAbsDiff(a.output.data(), b.output.data()) <= 1e-12);
  }
  SUBCASE("single head with identity projections matches the naive oracle") {
    const Matrix q = Random(3, 8, rng);
    const Matrix kv = Random(5, 8, rng);
    const auto r = CrossAttention(q, kv, Identity(8), 1);
    const auto expected = oracle::Attention(Rows(q), Rows(kv), Rows(kv));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t c = 0; c < 8; ++c) CHECK(std::abs(r.output(i, c) - expected[i][c]) <= 1e-12);
  }
  SUBCASE("rows are stochastic and kv permutation invariant") {
    for (int trial = 0; trial < 20; ++trial) {
      AttentionParams p{Random(8, 8, rng), Random(8, 8, rng), Random(8, 8, rng),
                        Random(8, 8, rng), std::vector<double>(8, 0.1), {}, {}, {}};
      const Matrix q = Random(3, 8, rng);
      const Matrix kv = Random(5, 8, rng);
      const auto a = CrossAttention(q, kv, p, 2);
      REQUIRE(a.weights.size() == 2);
      for (const auto& w : a.weights)
        for (std::size_t i = 0; i < w.rows(); ++i) {
          const double s = std::accumulate(w.row(i).begin(), w.row(i).end(), 0.0);
          CHECK(std::abs(s - 1.0) <= 1e-6);
        }
      std::vector<std::size_t> perm(5);
      std::iota(perm.begin(), perm.end(), 0);
      rng.Shuffle(perm);
      Matrix shuffled(5, 8);
      for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 8; ++c) shuffled(r, c) = kv(perm[r], c);
      CHECK(MaxAbsDiff(a.output.data(), CrossAttention(q, shuffled, p, 2).output.data()) <= 1e-6);
    }
  }
  SUBCASE("dimension errors") {
    const Matrix q = Random(3, 8, rng);
    CHECK_THROWS_AS(CrossAttention(q, Random(2, 6, rng), Identity(8), 1), Error);
    CHECK_THROWS_AS(CrossAttention(q, Random(2, 8, rng), Identity(8), 3), Error);
  }
  CHECK(FusionDims::HeadsFor(8192) == 64);
  CHECK(FusionDims::HeadsFor(64) == 1);
}

TEST_CASE("fuse residual") {
  Rng rng(6);
  const Matrix e = Random(4, 3, rng);
  CHECK(FuseResidual(e, Matrix(4, 3, 0.0)) == e);
  CHECK(FuseResidual(Matrix(4, 3, 0.0), e) == e);
  const Matrix a = Random(4, 3, rng);
  const Matrix s = FuseResidual(e, a);
  for (std::size_t i = 0; i < 12; ++i) CHECK(s.data()[i] == e.data()[i] + a.data()[i]);
  CHECK_THROWS_AS(FuseResidual(e, Matrix(3, 3)), Error);
}

TEST_CASE("adapter forward keeps the 2d shape and the residual") {
  Rng rng(7);
  const Matrix e2d = Random(4, 8, rng);
  const Grid geo = RandomGrid(1, 6, 3, 3, rng);
  AdapterParams p;
  p.gain_pre = std::vector<double>(6, 1.0);
  p.w1 = Random(10, 6, rng);
  p.w2 = Random(8, 10, rng);
  p.gain_q = std::vector<double>(8, 1.0);
  p.gain_kv = std::vector<double>(8, 1.0);
  p.attention = Identity(8);
  p.n_heads = 2;
  const Matrix out = AdapterForward(e2d, geo, 2, 2, p);
  CHECK(out.rows() == 4);
  CHECK(out.cols() == 8);
  Matrix zero_out = Matrix(8, 8, 0.0);
  p.attention.wo = zero_out;
  CHECK(AdapterForward(e2d, geo, 2, 2, p) == e2d);
}

TEST_CASE("eiea layout") {
  const auto empty = BuildEieaLayout(5, {});
  CHECK(empty.total == 16);
  CHECK(empty.segments[0].start == 0);
  CHECK(empty.segments[0].length == 5);
  const std::vector<std::int64_t> lens{3, 4};
  const auto two = BuildEieaLayout(5, lens);
  CHECK(two.total == 24);
  int mods = 0;
  for (const auto& s : two.segments) mods += s.kind == SegmentKind::kModMarker;
  CHECK(mods == 1);
  CHECK(LayoutIsValid(two, 2));
  const Matrix seq(24, 3, 1.0);
  CHECK(ExtractText(seq, two).rows() == 5);
  CHECK_THROWS_AS(BuildEieaLayout(0, {}), Error);
  const std::vector<std::int64_t> neg{2, -1};
  CHECK_THROWS_AS(BuildEieaLayout(3, neg), Error);
  const std::vector<std::int64_t> with_empty{0, 2, 0};
  CHECK(BuildEieaLayout(1, with_empty).total == 1 + 10 + 1 + 2 + 2);
}

TEST_CASE("fixtures round-trip through verify") {
  const Json fixture = GenerateFixture(3);
  const auto report = VerifyFixture(fixture);
  CHECK(report.pass());
  CHECK(report.cases.size() >= 7);
  std::set<std::string> ops;
  for (const auto& c : report.cases) ops.insert(c.op);
  for (const char* op : {"bilinear_resample", "rms_norm", "cross_attention", "fuse_residual",
                         "mlp_project", "adapter_forward", "eiea_layout"}) {
    CHECK(ops.count(op));
  }
  Json broken = fixture;
  auto& data = broken["cases"][0]["expected"]["output"]["data"];
  data[0] = data[0].get<double>() + 1.0;
  const auto bad = VerifyFixture(broken);
  CHECK_FALSE(bad.pass());
  CHECK_FALSE(bad.cases[0].pass);
  CHECK(bad.cases[0].max_abs_diff == doctest::Approx(1.0));

  Json unknown = fixture;
  unknown["cases"][0]["op"] = "conv3d";
  const auto u = VerifyFixture(unknown);
  CHECK_FALSE(u.pass());
  CHECK_FALSE(u.cases[0].error.empty());
}
