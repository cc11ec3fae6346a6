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

#include "curate/records.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "curate/error.hpp"

namespace curate {
namespace {

std::string Lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

bool OptionalBool(const Json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) return false;
  if (!it->is_boolean()) throw DataError(std::string("field \"") + name + "\" must be a boolean");
  return it->get<bool>();
}

std::vector<std::string> OptionalStringList(const Json& record,
                                            const char* name) {
  std::vector<std::string> out;
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw DataError(std::string("field \"") + name + "\" must be an array");
  }
  for (const Json& v : *it) {
    if (!v.is_string()) {
      throw DataError(std::string("field \"") + name +
                      "\" must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

double FiniteNumber(const Json& record, const char* name) {
  double v = RequireNumber(record, name);
  if (!std::isfinite(v)) {
    throw DataError(std::string("field \"") + name + "\" must be finite");
  }
  return v;
}

}  // namespace

const Json& RequireField(const Json& record, const char* name) {
  if (!record.is_object()) throw DataError("record is not a JSON object");
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) {
    throw DataError(std::string("missing required field \"") + name + "\"");
  }
  return *it;
}

std::string RequireString(const Json& record, const char* name) {
  const Json& v = RequireField(record, name);
  if (!v.is_string()) {
    throw DataError(std::string("field \"") + name + "\" must be a string");
  }
  return v.get<std::string>();
}

double RequireNumber(const Json& record, const char* name) {
  const Json& v = RequireField(record, name);
  if (!v.is_number()) {
    throw DataError(std::string("field \"") + name + "\" must be a number");
  }
  return v.get<double>();
}

Json SampleToJson(const VqaSample& sample) {
  Json j = Json::object();
  j["id"] = sample.id;
  j["dataset"] = sample.dataset_name;
  j["images"] = sample.image_refs;
  j["question"] = sample.question;
  j["answer"] = sample.answer;
  j["task_kind"] = std::string(ToString(sample.task_kind));
  j["tags"] = Json::array();
  for (const auto& tag : sample.semantic_tags) j["tags"].push_back(tag);
  if (sample.depth_ref) {
    j["depth"] = {{"path", sample.depth_ref->path},
                  {"width", sample.depth_ref->width},
                  {"height", sample.depth_ref->height}};
  }
  if (sample.objects) {
    Json objects = Json::array();
    for (const auto& o : *sample.objects) {
      Json jo = {{"x", o.center.x},
                 {"y", o.center.y},
                 {"z", o.center.z},
                 {"occluded", o.occluded},
                 {"background", o.background}};
      if (o.category) jo["category"] = *o.category;
      objects.push_back(std::move(jo));
    }
    j["objects"] = std::move(objects);
  }
  return j;
}

VqaSample SampleFromJson(const Json& record) {
  VqaSample s;
  s.id = RequireString(record, "id");
  if (s.id.empty()) throw DataError("field \"id\" must be nonempty");
  s.question = RequireString(record, "question");
  s.answer = RequireString(record, "answer");
  const std::string kind = RequireString(record, "task_kind");
  auto parsed = ParseTaskKind(kind);
  if (!parsed) throw DataError("unknown task_kind \"" + kind + "\"");
  s.task_kind = *parsed;

  if (auto it = record.find("dataset"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("field \"dataset\" must be a string");
    s.dataset_name = it->get<std::string>();
  }
  s.image_refs = OptionalStringList(record, "images");
  for (auto& tag : OptionalStringList(record, "tags")) {
    s.semantic_tags.insert(Lowercase(std::move(tag)));
  }

  if (auto it = record.find("depth"); it != record.end() && !it->is_null()) {
    if (!it->is_object()) throw DataError("field \"depth\" must be an object");
    DepthRef ref;
    ref.path = RequireString(*it, "path");
    const Json& w = RequireField(*it, "width");
    const Json& h = RequireField(*it, "height");
    if (!w.is_number_integer() || !h.is_number_integer() ||
        w.get<long long>() <= 0 || h.get<long long>() <= 0) {
      throw DataError("depth width/height must be positive integers");
    }
    ref.width = w.get<int>();
    ref.height = h.get<int>();
    s.depth_ref = std::move(ref);
  }

  if (auto it = record.find("objects"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw DataError("field \"objects\" must be an array");
    std::vector<Object3D> objects;
    objects.reserve(it->size());
    for (const Json& jo : *it) {
      Object3D o;
      o.center = {FiniteNumber(jo, "x"), FiniteNumber(jo, "y"),
                  FiniteNumber(jo, "z")};
      if (auto c = jo.find("category"); c != jo.end() && !c->is_null()) {
        if (!c->is_string()) {
          throw DataError("object \"category\" must be a string");
        }
        o.category = c->get<std::string>();
      }
      o.occluded = OptionalBool(jo, "occluded");
      o.background = OptionalBool(jo, "background");
      objects.push_back(std::move(o));
    }
    s.objects = std::move(objects);
  }
  return s;
}

Json EntropyToJson(const std::string& id, const EntropyReport& report) {
  Json j = Json::object();
  j["id"] = id;
  j["h_depth"] = report.h_depth;
  j["h_3d"] = report.h_3d;
  j["h_total"] = report.h_total;
  j["valid_blocks"] = report.valid_blocks;
  j["object_count"] = report.object_count;
  return j;
}

EntropyReport EntropyFromJson(const Json& record) {
  EntropyReport r;
  r.h_depth = FiniteNumber(record, "h_depth");
  r.h_3d = FiniteNumber(record, "h_3d");
  r.h_total = FiniteNumber(record, "h_total");
  r.valid_blocks = RequireField(record, "valid_blocks").get<std::size_t>();
  r.object_count = RequireField(record, "object_count").get<std::size_t>();
  return r;
}

Json QualityToJson(const std::string& id, const QualityAssessment& q) {
  Json j = Json::object();
  j["id"] = id;
  j["correctness"] = q.correctness;
  j["completeness"] = q.completeness;
  j["clarity"] = q.clarity;
  j["relevance"] = q.relevance;
  j["mean_score"] = q.mean_score;
  j["clamped"] = q.clamped;
  if (!q.rationale.empty()) j["rationale"] = q.rationale;
  return j;
}

QualityAssessment QualityFromJson(const Json& record) {
  QualityAssessment q;
  q.correctness = FiniteNumber(record, "correctness");
  q.completeness = FiniteNumber(record, "completeness");
  q.clarity = FiniteNumber(record, "clarity");
  q.relevance = FiniteNumber(record, "relevance");
  q.mean_score = FiniteNumber(record, "mean_score");
  q.clamped = OptionalBool(record, "clamped");
  if (auto it = record.find("rationale"); it != record.end() && it->is_string()) {
    q.rationale = it->get<std::string>();
  }
  return q;
}

Json RewardToJson(const std::string& id, const RewardBreakdown& reward) {
  Json j = Json::object();
  j["id"] = id;
  j["r_format"] = reward.r_format;
  j["r_correct"] = reward.r_correct;
  j["r_total"] = reward.r_total;
  j["verifier"] = std::string(ToString(reward.verifier));
  if (reward.flagged) j["flagged"] = true;
  return j;
}

RewardBreakdown RewardFromJson(const Json& record) {
  RewardBreakdown r;
  r.r_format = FiniteNumber(record, "r_format");
  r.r_correct = FiniteNumber(record, "r_correct");
  r.r_total = FiniteNumber(record, "r_total");
  const std::string verifier = RequireString(record, "verifier");
  auto kind = ParseTaskKind(verifier);
  if (!kind) throw DataError("unknown verifier \"" + verifier + "\"");
  r.verifier = *kind;
  r.flagged = OptionalBool(record, "flagged");
  return r;
}

}  // namespace curate
