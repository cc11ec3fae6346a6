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

#include "curate/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "curate/entropy.hpp"
#include "curate/error.hpp"
#include "curate/fusion.hpp"
#include "curate/grpo.hpp"
#include "curate/ingest.hpp"
#include "curate/records.hpp"
#include "curate/reward.hpp"
#include "curate/rng.hpp"
#include "curate/stats.hpp"

namespace curate {
namespace {

std::string DisplayName(const Path& path) {
  return path == "-" ? std::string("<stdin>") : path.string();
}

void AppendErrors(const Path& path, const std::vector<RecordError>& errors,
                  StageReport& report) {
  for (const auto& e : errors) {
    report.record_errors.push_back(DisplayName(path) + ":" + std::to_string(e.line) +
                                   ": " + e.reason);
  }
}

// Corpus sorted by id. Duplicate ids keep the first occurrence.
std::vector<VqaSample> ReadCorpus(const Path& path, bool require_images,
                                  StageReport& report) {
  SampleReader reader(path);
  std::vector<VqaSample> samples;
  std::map<std::string, std::size_t> seen;
  std::vector<RecordError> extra;
  while (auto sample = reader.Next()) {
    if (require_images) {
      if (auto reason = CurationRejectReason(*sample)) {
        extra.push_back({reader.line(), *reason});
        continue;
      }
    }
    if (auto it = seen.find(sample->id); it != seen.end()) {
      extra.push_back({reader.line(), "duplicate id \"" + sample->id +
                                          "\" (first seen on line " +
                                          std::to_string(it->second) + ")"});
      continue;
    }
    seen.emplace(sample->id, reader.line());
    samples.push_back(std::move(*sample));
  }
  std::vector<RecordError> errors = reader.errors();
  errors.insert(errors.end(), extra.begin(), extra.end());
  std::stable_sort(errors.begin(), errors.end(),
                   [](const auto& a, const auto& b) { return a.line < b.line; });
  AppendErrors(path, errors, report);
  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  return samples;
}

// Keyed records; `decode` may throw curate::Error to reject a line.
template <typename T, typename Decode>
std::map<std::string, T> ReadKeyed(const Path& path, Decode decode,
                                   StageReport& report) {
  JsonlReader reader(path);
  std::map<std::string, T> out;
  while (auto record = reader.Next()) {
    try {
      std::string id = RequireString(*record, "id");
      T value = decode(*record);
      if (out.count(id)) {
        reader.AddError("duplicate id \"" + id + "\"");
        continue;
      }
      out.emplace(std::move(id), std::move(value));
    } catch (const Error& e) {
      reader.AddError(e.what());
    }
  }
  AppendErrors(path, reader.errors(), report);
  return out;
}

bool IsEmbodied(const VqaSample& sample, const CurriculumConfig& config) {
  return sample.semantic_tags.count("embodied") > 0 ||
         config.embodied_datasets.count(sample.dataset_name) > 0;
}

// Depth paths are stored relative to their corpus file. When the kept corpus
// lands in another directory the paths are rebased onto it.
VqaSample RebaseDepth(VqaSample sample, const Path& from, const Path& to) {
  if (!sample.depth_ref || to == "-") return sample;
  const Path resolved = ResolveRelative(from, sample.depth_ref->path);
  const Path target = std::filesystem::absolute(resolved).lexically_normal();
  const Path out_dir = std::filesystem::absolute(to).lexically_normal().parent_path();
  const Path rel = target.lexically_relative(out_dir);
  sample.depth_ref->path = rel.empty() ? target.generic_string() : rel.generic_string();
  return sample;
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

void ParallelFor(std::size_t n, std::size_t jobs,
                 const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ScoredSample> ScoreSamples(std::span<const VqaSample> samples,
                                       const DepthLoader& load,
                                       const EntropyConfig& config,
                                       std::size_t jobs) {
  std::vector<ScoredSample> out(samples.size());
  ParallelFor(samples.size(), jobs, [&](std::size_t i) {
    const VqaSample& s = samples[i];
    out[i].id = s.id;
    try {
      if (s.depth_ref) {
        const DepthMap depth = load(s);
        out[i].report = ComputeTotalEntropy(s, &depth, config);
      } else {
        out[i].report = ComputeTotalEntropy(s, nullptr, config);
      }
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

StageReport RunScore(const Path& corpus, const Path& out, const RunOptions& opts) {
  StageReport report;
  const auto samples = ReadCorpus(corpus, true, report);
  const DepthLoader load = [&corpus](const VqaSample& s) {
    const auto& ref = *s.depth_ref;
    return LoadDepthMap(ResolveRelative(corpus, ref.path),
                        static_cast<std::size_t>(ref.width),
                        static_cast<std::size_t>(ref.height));
  };
  const auto scored = ScoreSamples(samples, load, opts.config.entropy, opts.jobs);
  LineWriter writer(out);
  for (const auto& s : scored) {
    if (!s.report) {
      report.record_errors.push_back(DisplayName(corpus) + ": " + s.id + ": " + s.error);
      continue;
    }
    writer.Write(EntropyToJson(s.id, *s.report));
    ++report.written;
  }
  writer.Close();
  return report;
}

StageReport RunClassify(const Path& corpus, const Path& entropy, const Path& out,
                        const RunOptions& opts) {
  StageReport report;
  const auto samples = ReadCorpus(corpus, true, report);
  std::map<std::string, const VqaSample*> by_id;
  for (const auto& s : samples) by_id.emplace(s.id, &s);
  const auto scores =
      ReadKeyed<EntropyReport>(entropy, [](const Json& j) { return EntropyFromJson(j); },
                               report);
  LineWriter writer(out);
  for (const auto& [id, score] : scores) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      report.record_errors.push_back(DisplayName(entropy) + ": " + id +
                                     ": no corpus sample with this id");
      continue;
    }
    ClassifiedSample c;
    c.id = id;
    c.h_total = score.h_total;
    c.dataset = it->second->dataset_name;
    c.embodied = IsEmbodied(*it->second, opts.config.curriculum);
    try {
      c.tier = ClassifyTier(score.h_total, it->second->semantic_tags,
                            opts.config.taxonomy);
    } catch (const Error& e) {
      report.record_errors.push_back(DisplayName(entropy) + ": " + id + ": " + e.what());
      continue;
    }
    writer.Write(ClassifiedToJson(c));
    ++report.written;
  }
  writer.Close();
  return report;
}

StageReport RunAssess(const Path& corpus, const Path& out, const RunOptions& opts) {
  std::unique_ptr<AssessmentClient> client;
  if (opts.quality_stub) {
    client = std::make_unique<StubAssessmentClient>(*opts.quality_stub);
  } else if (opts.quality_endpoint && !opts.quality_endpoint->empty()) {
    client = std::make_unique<HttpAssessmentClient>(*opts.quality_endpoint);
  } else {
    throw InvalidArgument(
        "assess needs --quality-endpoint, CURATE_QUALITY_ENDPOINT or --quality-stub");
  }
  StageReport report;
  const auto samples = ReadCorpus(corpus, true, report);

  std::size_t next = 0;
  const SampleSource source = [&]() -> std::optional<VqaSample> {
    if (next >= samples.size()) return std::nullopt;
    return samples[next++];
  };
  std::vector<AssessOutcome> outcomes;
  outcomes.reserve(samples.size());
  BatchOptions batch;
  batch.parallelism = opts.jobs;
  batch.retry = opts.config.retry;
  batch.sleep = opts.sleep;
  batch.seed = opts.seed;
  BatchAssess(source, *client, batch,
              [&](AssessOutcome o) { outcomes.push_back(std::move(o)); });
  std::stable_sort(outcomes.begin(), outcomes.end(), [](const auto& a, const auto& b) {
    return a.sample.id < b.sample.id;
  });

  LineWriter writer(out);
  for (const auto& o : outcomes) {
    if (o.ok()) {
      writer.Write(QualityToJson(o.sample.id, std::get<QualityAssessment>(o.result)));
    } else {
      const auto& f = std::get<AssessFailure>(o.result);
      Json j = Json::object();
      j["id"] = o.sample.id;
      j["error"] = f.message;
      j["unavailable"] = f.unavailable;
      writer.Write(j);
      ++report.service_failures;
    }
    ++report.written;
  }
  writer.Close();
  return report;
}

StageReport RunFilter(const Path& corpus, const Path& entropy, const Path& quality,
                      const Path& out, const Path& drops, const RunOptions& opts) {
  StageReport report;
  const auto samples = ReadCorpus(corpus, true, report);
  const auto scores =
      ReadKeyed<EntropyReport>(entropy, [](const Json& j) { return EntropyFromJson(j); },
                               report);
  // Lines carrying "error" are failed assessments: the sample has no score.
  const auto judged = ReadKeyed<std::optional<QualityAssessment>>(
      quality,
      [](const Json& j) -> std::optional<QualityAssessment> {
        if (j.contains("error")) return std::nullopt;
        return QualityFromJson(j);
      },
      report);

  LineWriter kept(out);
  LineWriter dropped(drops);
  for (const auto& s : samples) {
    Json drop = Json::object();
    drop["id"] = s.id;
    auto e = scores.find(s.id);
    auto q = judged.find(s.id);
    if (e == scores.end()) {
      drop["reason"] = "missing-entropy";
    } else if (q == judged.end() || !q->second) {
      drop["reason"] = "missing-quality";
      drop["h_total"] = e->second.h_total;
    } else {
      const auto decision = Retain(e->second, *q->second, opts.config.filter);
      if (decision.keep) {
        kept.Write(SampleToJson(RebaseDepth(s, corpus, out)));
        ++report.written;
        continue;
      }
      drop["reason"] = std::string(ToString(*decision.reason));
      drop["h_total"] = e->second.h_total;
      drop["mean_score"] = q->second->mean_score;
    }
    dropped.Write(drop);
  }
  kept.Close();
  dropped.Close();
  return report;
}

StageReport RunCurriculum(const Path& tiers, const Path& out,
                          const CurriculumRequest& request, const RunOptions& opts) {
  StageReport report;
  auto schedule = ScheduleByName(request.schedule);
  if (!schedule) {
    throw InvalidArgument("unknown schedule \"" + request.schedule +
                          "\" (expected linear or cosine)");
  }
  if (!(request.progress >= 0.0 && request.progress <= 1.0)) {
    throw InvalidArgument("progress must be in [0, 1]");
  }
  const auto classified = ReadKeyed<ClassifiedSample>(
      tiers, [](const Json& j) { return ClassifiedFromJson(j); }, report);
  std::vector<ClassifiedSample> corpus;
  corpus.reserve(classified.size());
  for (const auto& [id, c] : classified) corpus.push_back(c);

  ManifestOptions options;
  options.progress = request.progress;
  options.size = request.size;
  options.schedule = *schedule;
  options.seed = opts.seed;
  CurriculumManifest manifest;
  try {
    manifest = BuildStageManifest(request.stage, corpus, options, opts.config.curriculum);
  } catch (const Error& e) {
    // An empty or undersized tier is a property of the data, not of the flags.
    if (e.kind() == ErrorKind::kInvalidArgument) throw DataError(e.what());
    throw;
  }
  LineWriter writer(out);
  for (const auto& line : ManifestToJsonLines(manifest)) writer.Write(line);
  writer.Close();
  report.written = manifest.entries.size();
  return report;
}

StageReport RunReward(const Path& corpus, const Path& responses, const Path& out,
                      const RunOptions& opts) {
  StageReport report;
  const auto samples = ReadCorpus(corpus, false, report);
  std::map<std::string, const VqaSample*> by_id;
  for (const auto& s : samples) by_id.emplace(s.id, &s);

  struct Item {
    std::string id;
    std::size_t index = 0;  // position among responses to the same sample
    std::string response;
    std::optional<RewardBreakdown> reward;
    std::string error;
  };
  std::vector<Item> items;
  std::map<std::string, std::size_t> per_id;
  JsonlReader reader(responses);
  while (auto record = reader.Next()) {
    try {
      Item item;
      item.id = RequireString(*record, "id");
      item.response = RequireString(*record, "response");
      if (!by_id.count(item.id)) {
        reader.AddError("no corpus sample with id \"" + item.id + "\"");
        continue;
      }
      item.index = per_id[item.id]++;
      items.push_back(std::move(item));
    } catch (const Error& e) {
      reader.AddError(e.what());
    }
  }
  AppendErrors(responses, reader.errors(), report);
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });

  ParallelFor(items.size(), opts.jobs, [&](std::size_t i) {
    try {
      items[i].reward = ComputeReward(items[i].response, *by_id.at(items[i].id),
                                      opts.config.reward);
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  });

  LineWriter writer(out);
  for (const auto& item : items) {
    if (!item.reward) {
      report.record_errors.push_back(DisplayName(responses) + ": " + item.id + ": " +
                                     item.error);
      continue;
    }
    Json j = RewardToJson(item.id, *item.reward);
    j["index"] = item.index;
    writer.Write(j);
    ++report.written;
  }
  writer.Close();
  return report;
}

StageReport RunGrpo(const Path& fixtures, const Path& out, const RunOptions& opts) {
  StageReport report;
  struct Item {
    std::string id;
    Json breakdown;
  };
  std::vector<Item> items;
  JsonlReader reader(fixtures);
  while (auto record = reader.Next()) {
    try {
      const GrpoGroup group = GroupFromJson(*record, opts.config.reward.advantage_eps);
      Item item;
      if (record->contains("id")) item.id = RequireString(*record, "id");
      item.breakdown = BreakdownToJson(GrpoObjective(group, opts.config.reward));
      items.push_back(std::move(item));
    } catch (const Error& e) {
      reader.AddError(e.what());
    }
  }
  AppendErrors(fixtures, reader.errors(), report);
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  LineWriter writer(out);
  for (auto& item : items) {
    Json j = Json::object();
    if (!item.id.empty()) j["id"] = item.id;
    for (auto& [k, v] : item.breakdown.items()) j[k] = v;
    writer.Write(j);
    ++report.written;
  }
  writer.Close();
  return report;
}

StageReport RunFusionVerify(const Path& fixture, const Path& out, bool& passed) {
  StageReport report;
  std::ifstream in(fixture);
  if (!in) throw DataError("cannot open fixture " + fixture.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError("fixture " + fixture.string() + " is not valid JSON: " + e.what());
  }
  const fusion::VerifyReport verify = fusion::VerifyFixture(doc);
  LineWriter writer(out);
  for (const auto& c : verify.cases) {
    Json j = Json::object();
    j["name"] = c.name;
    j["op"] = c.op;
    j["max_abs_diff"] = c.max_abs_diff;
    j["tolerance"] = verify.tolerance;
    j["pass"] = c.pass;
    if (!c.error.empty()) j["error"] = c.error;
    writer.Write(j);
    ++report.written;
  }
  writer.Close();
  passed = verify.pass();
  return report;
}

StageReport RunFusionGenerate(const Path& out, const RunOptions& opts) {
  StageReport report;
  LineWriter writer(out);
  writer.Write(fusion::GenerateFixture(opts.seed));
  writer.Close();
  report.written = 1;
  return report;
}

std::optional<StatsMode> ParseStatsMode(std::string_view text) {
  if (text == "distribution") return StatsMode::kDistribution;
  if (text == "normalize") return StatsMode::kNormalize;
  if (text == "tiers") return StatsMode::kTiers;
  return std::nullopt;
}

std::optional<StatsFormat> ParseStatsFormat(std::string_view text) {
  if (text == "text") return StatsFormat::kText;
  if (text == "jsonl") return StatsFormat::kJsonl;
  return std::nullopt;
}

StageReport RunStats(StatsMode mode, const Path& input, StatsFormat format,
                     const Path& out, const RunOptions& opts) {
  StageReport report;
  LineWriter writer(out);
  switch (mode) {
    case StatsMode::kDistribution: {
      const auto samples = ReadCorpus(input, false, report);
      const auto rows = DistributionReport(samples);
      if (format == StatsFormat::kText) {
        writer.WriteRaw(FormatDistribution(rows));
      } else {
        for (const auto& r : rows) {
          writer.Write(Json{{"dataset", r.dataset}, {"count", r.count}, {"ratio", r.ratio}});
        }
      }
      report.written = rows.size();
      break;
    }
    case StatsMode::kNormalize: {
      JsonlReader reader(input);
      std::vector<std::string> names;
      std::vector<double> scores;
      while (auto record = reader.Next()) {
        try {
          std::string name = record->contains("name") ? RequireString(*record, "name")
                                                      : std::to_string(names.size());
          const double score = RequireNumber(*record, "score");
          names.push_back(std::move(name));
          scores.push_back(score);
        } catch (const Error& e) {
          reader.AddError(e.what());
        }
      }
      AppendErrors(input, reader.errors(), report);
      if (scores.empty()) throw DataError("no scores to normalize");
      NormalizedScores normalized;
      try {
        normalized = NormalizeScores(scores, opts.config.normalize_eps);
      } catch (const Error& e) {
        throw DataError(e.what());
      }
      if (normalized.negative_input) {
        report.warnings.push_back("negative scores normalized as-is");
      }
      std::size_t width = 4;
      for (const auto& n : names) width = std::max(width, n.size());
      if (format == StatsFormat::kText) {
        writer.WriteRaw(Pad("name", width) + " " + Pad("score", 12) + " normalized\n");
      }
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (format == StatsFormat::kText) {
          writer.WriteRaw(Pad(names[i], width) + " " + Pad(Fixed(scores[i], 4), 12) + " " +
                          Fixed(normalized.values[i], 6) + "\n");
        } else {
          writer.Write(Json{{"name", names[i]},
                            {"score", scores[i]},
                            {"normalized", normalized.values[i]}});
        }
      }
      report.written = names.size();
      break;
    }
    case StatsMode::kTiers: {
      const auto classified = ReadKeyed<ClassifiedSample>(
          input, [](const Json& j) { return ClassifiedFromJson(j); }, report);
      std::vector<ClassifiedSample> corpus;
      for (const auto& [id, c] : classified) corpus.push_back(c);
      const auto histogram = TierHistogram(corpus);
      if (format == StatsFormat::kText) writer.WriteRaw("tier      count    ratio\n");
      for (const auto& [tier, count] : histogram) {
        if (format == StatsFormat::kText) {
          char line[128];
          std::snprintf(line, sizeof(line), "%-4s %10zu %7.2f%%\n",
                        std::string(ToString(tier)).c_str(), count.count,
                        count.fraction * 100.0);
          writer.WriteRaw(line);
        } else {
          writer.Write(Json{{"tier", std::string(ToString(tier))},
                            {"count", count.count},
                            {"fraction", count.fraction}});
        }
      }
      report.written = histogram.size();
      break;
    }
  }
  writer.Close();
  return report;
}

SyntheticSample MakeSyntheticSample(std::size_t index, std::uint64_t seed) {
  static const char* kDatasets[] = {"drive-synth", "indoor-synth", "robot-synth",
                                    "web-synth"};
  static const TaskKind kKinds[] = {TaskKind::kSelection, TaskKind::kMatching,
                                    TaskKind::kPoint, TaskKind::kBox,
                                    TaskKind::kOpenDescription};
  Rng rng(SplitMix64(seed) ^ SplitMix64(index + 1));
  char id[32];
  std::snprintf(id, sizeof(id), "syn-%05zu", index);

  SyntheticSample out;
  VqaSample& s = out.sample;
  s.id = id;
  s.dataset_name = kDatasets[index % 4];
  s.image_refs = {"images/" + s.id + "_front.jpg"};
  if (index % 3 == 1) s.image_refs.push_back("images/" + s.id + "_left.jpg");
  s.task_kind = kKinds[index % 5];
  switch (s.task_kind) {
    case TaskKind::kSelection:
      s.question = "Which object is closest to the camera? (A) car (B) truck (C) cone";
      s.answer = std::string(1, static_cast<char>('A' + rng.Index(3)));
      break;
    case TaskKind::kMatching:
      s.question = "Which view shows the pedestrian waiting at the crossing?";
      s.answer = rng.Index(2) == 0 ? "front-left" : "front-right";
      break;
    case TaskKind::kPoint: {
      s.question = "Point to the nearest traffic cone.";
      const int x = static_cast<int>(rng.Index(640));
      const int y = static_cast<int>(rng.Index(480));
      s.answer = "[" + std::to_string(x) + ", " + std::to_string(y) + "]";
      break;
    }
    case TaskKind::kBox: {
      s.question = "Locate the parked car.";
      const int x = static_cast<int>(rng.Index(500));
      const int y = static_cast<int>(rng.Index(380));
      const int w = 20 + static_cast<int>(rng.Index(120));
      const int h = 20 + static_cast<int>(rng.Index(100));
      s.answer = "[" + std::to_string(x) + ", " + std::to_string(y) + ", " +
                 std::to_string(x + w) + ", " + std::to_string(y + h) + "]";
      break;
    }
    case TaskKind::kOpenDescription:
      s.question = "Describe the spatial layout of the scene.";
      s.answer = "two parked cars on the left and a cyclist ahead on a wet road";
      break;
  }
  if (index % 5 == 3) s.semantic_tags.insert("multi-view");
  if (index % 9 == 4) s.semantic_tags.insert("temporal");
  if (index % 4 == 0 || index % 4 == 2) s.semantic_tags.insert("embodied");

  // Target complexity cycles through the four tier bands.
  static const double kBands[4][2] = {{0.12, 0.28}, {0.33, 0.48}, {0.53, 0.68}, {0.73, 0.92}};
  const auto& band = kBands[(index / 2) % 4];
  const double target = rng.Uniform(band[0], band[1]);
  const double h_depth = std::clamp(target + rng.Uniform(-0.05, 0.05), 0.0, 1.0);
  const double h_3d = std::clamp((target - 0.6 * h_depth) / 0.4, 0.0, 1.0);

  const bool has_depth = index % 7 != 6;
  if (has_depth) {
    constexpr std::size_t kSide = 32;
    DepthMap& d = out.depth;
    d.width = kSide;
    d.height = kSide;
    d.values.assign(kSide * kSide, 0.0f);
    const double variance = 0.01 + h_depth * (25.0 - 0.01);
    const double spread = std::sqrt(variance);
    for (std::size_t br = 0; br < kSide / 8; ++br) {
      for (std::size_t bc = 0; bc < kSide / 8; ++bc) {
        const double base = rng.Uniform(8.0, 40.0);
        for (std::size_t r = 0; r < 8; ++r) {
          for (std::size_t c = 0; c < 8; ++c) {
            // Checkerboard of base -/+ spread gives the block that exact variance.
            const double sign = ((r + c) % 2 == 0) ? -1.0 : 1.0;
            d.values[(br * 8 + r) * kSide + bc * 8 + c] =
                static_cast<float>(base + sign * spread);
          }
        }
      }
    }
    // A few invalid returns, as from sky pixels.
    for (int k = 0; k < 6; ++k) d.values[rng.Index(d.values.size())] = 0.0f;
    s.depth_ref = DepthRef{"depth/" + s.id + ".f32", static_cast<int>(kSide),
                           static_cast<int>(kSide)};
  }

  // k objects in k distinct cells of the default 8x8x4 grid give log2(k)/8.
  const std::size_t k = static_cast<std::size_t>(std::lround(std::exp2(8.0 * h_3d)));
  std::vector<int> cells(256);
  for (int i = 0; i < 256; ++i) cells[i] = i;
  rng.Shuffle(cells);
  std::vector<Object3D> objects;
  static const char* kCategories[] = {"car", "truck", "pedestrian", "cyclist", "cone"};
  for (std::size_t i = 0; i < std::min<std::size_t>(k, 256); ++i) {
    const int cell = cells[i];
    const int ix = cell / 32;
    const int iy = (cell / 4) % 8;
    const int iz = cell % 4;
    Object3D o;
    o.center = {-40.0 + 10.0 * (ix + rng.Uniform(0.1, 0.9)),
                -40.0 + 10.0 * (iy + rng.Uniform(0.1, 0.9)),
                -3.0 + 2.0 * (iz + rng.Uniform(0.1, 0.9))};
    o.category = kCategories[rng.Index(5)];
    objects.push_back(o);
  }
  if (h_3d > 0.0 || index % 2 == 0) {
    Object3D hidden;
    hidden.center = {1.0, 2.0, 0.5};
    hidden.category = "car";
    hidden.occluded = true;
    objects.push_back(hidden);
    Object3D far;
    far.center = {90.0, 0.0, 0.0};
    far.category = "building";
    far.background = true;
    objects.push_back(far);
  }
  if (!objects.empty() && index % 11 != 10) s.objects = std::move(objects);
  return out;
}

StageReport GenerateSyntheticCorpus(const Path& dir, std::size_t count,
                                    const RunOptions& opts) {
  StageReport report;
  std::error_code ec;
  std::filesystem::create_directories(dir / "depth", ec);
  if (ec) throw DataError("cannot create " + (dir / "depth").string() + ": " + ec.message());
  LineWriter writer(dir / "corpus.jsonl");
  for (std::size_t i = 0; i < count; ++i) {
    const SyntheticSample s = MakeSyntheticSample(i, opts.seed);
    if (s.sample.depth_ref) WriteDepthMap(dir / s.sample.depth_ref->path, s.depth);
    writer.Write(SampleToJson(s.sample));
    ++report.written;
  }
  writer.Close();
  return report;
}

}  // namespace curate
