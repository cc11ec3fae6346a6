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

// Outcome reward for sampled policy responses: a binary format channel (one
// well-formed <answer>...</answer> span) and a task-matched correctness
// channel, combined as
//
//   r_total = clamp(lambda_format * r_format + lambda_correct * r_correct, 0, 1)

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "curate/types.hpp"

namespace curate {

struct Box2D {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool WellFormed() const;
  double Area() const { return (x_max - x_min) * (y_max - y_min); }
  bool operator==(const Box2D&) const = default;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2D&) const = default;
};

enum class ParseFailure { kMissingOpen, kMissingClose, kMultipleSpans, kNested };

std::string_view ToString(ParseFailure failure);

// Either the trimmed span interior or the reason no unique span was found.
using ParsedAnswer = std::variant<std::string, ParseFailure>;

ParsedAnswer ParseAnswer(std::string_view response);

// A verifier score plus a flag for non-finite or malformed inputs.
struct Score {
  double value = 0.0;
  bool flagged = false;
};

// Trim, collapse internal whitespace runs to one space, ASCII case-fold.
std::string NormalizeText(std::string_view text);

double ScoreExact(std::string_view pred, std::string_view gt);

// max(0, 1 - |pred - gt| / radius). Requires radius > 0.
Score ScorePoint(const Point2D& pred, const Point2D& gt, double radius);

// Intersection over union. Two identical degenerate boxes score 1.
Score ScoreIou(const Box2D& pred, const Box2D& gt);

// Pluggable similarity backend for open-ended answers, e.g. an embedding
// service. May throw; ScoreSemantic then falls back to token F1.
class SemanticBackend {
 public:
  virtual ~SemanticBackend() = default;
  virtual double Similarity(std::string_view pred, std::string_view gt) = 0;
};

// Token-level F1 over normalized whitespace tokens (multiset overlap).
double TokenF1(std::string_view pred, std::string_view gt);

Score ScoreSemantic(std::string_view pred, std::string_view gt,
                    SemanticBackend* backend = nullptr);

// Parses a bracketed numeric list such as "[12, 34]" or "[1,2,3,4]".
std::optional<std::vector<double>> ParseNumberList(std::string_view text);

// clamp(lambda_format * r_format + lambda_correct * r_correct, 0, 1).
double CombineReward(double r_format, double r_correct, const RewardConfig& config);

// Throws DataError when a point or box task's ground truth does not parse.
RewardBreakdown ComputeReward(std::string_view response,
                              const VqaSample& sample,
                              const RewardConfig& config,
                              SemanticBackend* backend = nullptr);

}  // namespace curate
