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

#include "curate/reward.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "curate/error.hpp"

namespace curate {
namespace {

constexpr std::string_view kOpen = "<answer>";
constexpr std::string_view kClose = "</answer>";

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> Tokens(std::string_view text) {
  std::vector<std::string> out;
  const std::string norm = NormalizeText(text);
  std::size_t start = 0;
  while (start < norm.size()) {
    std::size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    out.push_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

bool Box2D::WellFormed() const {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
}

std::string_view ToString(ParseFailure failure) {
  switch (failure) {
    case ParseFailure::kMissingOpen: return "missing-open";
    case ParseFailure::kMissingClose: return "missing-close";
    case ParseFailure::kMultipleSpans: return "multiple-spans";
    case ParseFailure::kNested: return "nested";
  }
  return "missing-open";
}

ParsedAnswer ParseAnswer(std::string_view response) {
  int depth = 0;
  int spans = 0;
  std::size_t interior_begin = 0;
  std::string_view interior;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t open = response.find(kOpen, pos);
    const std::size_t close = response.find(kClose, pos);
    if (open == std::string_view::npos && close == std::string_view::npos) break;
    if (open < close) {
      if (depth > 0) return ParseFailure::kNested;
      depth = 1;
      interior_begin = open + kOpen.size();
      pos = interior_begin;
    } else {
      if (depth == 0) return ParseFailure::kMissingOpen;
      depth = 0;
      ++spans;
      interior = response.substr(interior_begin, close - interior_begin);
      pos = close + kClose.size();
    }
  }
  if (depth > 0) return ParseFailure::kMissingClose;
  if (spans == 0) return ParseFailure::kMissingOpen;
  if (spans > 1) return ParseFailure::kMultipleSpans;
  return std::string(Trim(interior));
}

std::string NormalizeText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : Trim(text)) {
    if (IsSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

double ScoreExact(std::string_view pred, std::string_view gt) {
  return NormalizeText(pred) == NormalizeText(gt) ? 1.0 : 0.0;
}

Score ScorePoint(const Point2D& pred, const Point2D& gt, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("point radius must be > 0");
  if (!std::isfinite(pred.x) || !std::isfinite(pred.y) ||
      !std::isfinite(gt.x) || !std::isfinite(gt.y)) {
    return {0.0, true};
  }
  const double dist = std::hypot(pred.x - gt.x, pred.y - gt.y);
  return {std::max(0.0, 1.0 - dist / radius), false};
}

Score ScoreIou(const Box2D& pred, const Box2D& gt) {
  if (!pred.WellFormed() || !gt.WellFormed()) return {0.0, true};
  const double pa = pred.Area();
  const double ga = gt.Area();
  if (pa == 0.0 || ga == 0.0) return {pred == gt ? 1.0 : 0.0, false};
  const double iw =
      std::max(0.0, std::min(pred.x_max, gt.x_max) - std::max(pred.x_min, gt.x_min));
  const double ih =
      std::max(0.0, std::min(pred.y_max, gt.y_max) - std::max(pred.y_min, gt.y_min));
  const double inter = iw * ih;
  const double uni = pa + ga - inter;
  return {std::clamp(inter / uni, 0.0, 1.0), false};
}

double TokenF1(std::string_view pred, std::string_view gt) {
  const auto p = Tokens(pred);
  const auto g = Tokens(gt);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : g) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / p.size();
  const double recall = static_cast<double>(overlap) / g.size();
  return 2.0 * precision * recall / (precision + recall);
}

Score ScoreSemantic(std::string_view pred, std::string_view gt,
                    SemanticBackend* backend) {
  if (backend) {
    try {
      const double s = backend->Similarity(pred, gt);
      if (std::isfinite(s)) return {std::clamp(s, 0.0, 1.0), false};
    } catch (const std::exception&) {
    }
    return {TokenF1(pred, gt), true};
  }
  return {TokenF1(pred, gt), false};
}

std::optional<std::vector<double>> ParseNumberList(std::string_view text) {
  text = Trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    return std::nullopt;
  }
  text = text.substr(1, text.size() - 2);
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = Trim(text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (item.empty()) return std::nullopt;
    if (item.front() == '+') item.remove_prefix(1);
    double v = 0.0;
    auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || end != item.data() + item.size()) {
      return std::nullopt;
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double CombineReward(double r_format, double r_correct, const RewardConfig& config) {
  return std::clamp(config.lambda_format * r_format + config.lambda_correct * r_correct,
                    0.0, 1.0);
}

RewardBreakdown ComputeReward(std::string_view response,
                              const VqaSample& sample,
                              const RewardConfig& config,
                              SemanticBackend* backend) {
  RewardBreakdown out;
  out.verifier = sample.task_kind;
  const ParsedAnswer parsed = ParseAnswer(response);
  const std::string* extracted = std::get_if<std::string>(&parsed);
  out.r_format = extracted ? 1.0 : 0.0;

  switch (sample.task_kind) {
    case TaskKind::kSelection:
    case TaskKind::kMatching:
      out.r_correct = ScoreExact(extracted ? *extracted : response, sample.answer);
      break;
    case TaskKind::kOpenDescription: {
      const Score s =
          ScoreSemantic(extracted ? *extracted : response, sample.answer, backend);
      out.r_correct = s.value;
      out.flagged = s.flagged;
      break;
    }
    case TaskKind::kPoint: {
      const auto gt = ParseNumberList(sample.answer);
      if (!gt || (gt->size() != 2 && gt->size() != 4)) {
        throw DataError("sample " + sample.id +
                        ": point ground truth must be [x, y] or [x1, y1, x2, y2]");
      }
      Point2D gt_point{(*gt)[0], (*gt)[1]};
      double radius = config.point_radius_px;
      if (gt->size() == 4) {
        gt_point = {((*gt)[0] + (*gt)[2]) / 2.0, ((*gt)[1] + (*gt)[3]) / 2.0};
        const double diag = std::hypot((*gt)[2] - (*gt)[0], (*gt)[3] - (*gt)[1]);
        if (diag > 0.0) radius = diag / 2.0;
      }
      if (!extracted) break;
      const auto pred = ParseNumberList(*extracted);
      if (!pred || (pred->size() != 2 && pred->size() != 4)) break;
      Point2D pred_point{(*pred)[0], (*pred)[1]};
      if (pred->size() == 4) {
        pred_point = {((*pred)[0] + (*pred)[2]) / 2.0,
                      ((*pred)[1] + (*pred)[3]) / 2.0};
      }
      const Score s = ScorePoint(pred_point, gt_point, radius);
      out.r_correct = s.value;
      out.flagged = s.flagged;
      break;
    }
    case TaskKind::kBox: {
      const auto gt = ParseNumberList(sample.answer);
      if (!gt || gt->size() != 4) {
        throw DataError("sample " + sample.id +
                        ": box ground truth must be [x1, y1, x2, y2]");
      }
      const Box2D gt_box{(*gt)[0], (*gt)[1], (*gt)[2], (*gt)[3]};
      if (!gt_box.WellFormed()) {
        throw DataError("sample " + sample.id + ": malformed ground-truth box");
      }
      if (!extracted) break;
      const auto pred = ParseNumberList(*extracted);
      if (!pred || pred->size() != 4) break;
      const Score s =
          ScoreIou({(*pred)[0], (*pred)[1], (*pred)[2], (*pred)[3]}, gt_box);
      out.r_correct = s.value;
      out.flagged = s.flagged;
      break;
    }
  }
  out.r_total = CombineReward(out.r_format, out.r_correct, config);
  return out;
}

}  // namespace curate
