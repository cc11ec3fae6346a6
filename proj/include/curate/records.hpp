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

// JSON record encodings for the line-delimited files exchanged between
// pipeline stages. Decoders throw curate::Error (kData) with a reason that
// names the offending field.

#pragma once

#include <string>

#include "curate/types.hpp"
#include "json.hpp"

namespace curate {

using Json = nlohmann::json;

// Sample record:
//   {"id", "dataset", "images", "question", "answer", "task_kind", "tags",
//    "depth": {"path", "width", "height"}?, "objects": [...]?}
Json SampleToJson(const VqaSample& sample);
VqaSample SampleFromJson(const Json& record);

// {"id", "h_depth", "h_3d", "h_total", "valid_blocks", "object_count"}
Json EntropyToJson(const std::string& id, const EntropyReport& report);
EntropyReport EntropyFromJson(const Json& record);

// {"id", "correctness", "completeness", "clarity", "relevance",
//  "mean_score", "clamped", "rationale"?}
Json QualityToJson(const std::string& id, const QualityAssessment& quality);
QualityAssessment QualityFromJson(const Json& record);

// {"id", "r_format", "r_correct", "r_total", "verifier"}
Json RewardToJson(const std::string& id, const RewardBreakdown& reward);
RewardBreakdown RewardFromJson(const Json& record);

// Typed field access with error messages that name the field.
const Json& RequireField(const Json& record, const char* name);
std::string RequireString(const Json& record, const char* name);
double RequireNumber(const Json& record, const char* name);

}  // namespace curate
