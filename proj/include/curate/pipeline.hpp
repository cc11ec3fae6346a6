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

// File-based pipeline stages. Every stage reads line-delimited records,
// processes samples (in parallel up to `jobs`) and writes its output sorted by
// sample id, so equal inputs and seeds give byte-identical files. Malformed
// input records are collected in StageReport::record_errors and skipped; the
// rest of the output is still written.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curate/config.hpp"
#include "curate/quality.hpp"
#include "curate/taxonomy.hpp"
#include "curate/types.hpp"

namespace curate {

using Path = std::filesystem::path;

struct RunOptions {
  PipelineConfig config;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::optional<std::string> quality_endpoint;
  std::optional<StubAssessmentClient::Options> quality_stub;
  Sleeper sleep = RealSleep;
};

struct StageReport {
  std::size_t written = 0;
  std::vector<std::string> record_errors;  // "<file>:<line>: <reason>"
  std::size_t service_failures = 0;        // assess only
  std::vector<std::string> warnings;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void ParallelFor(std::size_t n, std::size_t jobs,
                 const std::function<void(std::size_t)>& fn);

using DepthLoader = std::function<DepthMap(const VqaSample&)>;

struct ScoredSample {
  std::string id;
  std::optional<EntropyReport> report;
  std::string error;  // set when report is empty
};

// Scores samples in memory; order of the result matches the input.
std::vector<ScoredSample> ScoreSamples(std::span<const VqaSample> samples,
                                       const DepthLoader& load,
                                       const EntropyConfig& config,
                                       std::size_t jobs);

// corpus -> entropy lines.
StageReport RunScore(const Path& corpus, const Path& out, const RunOptions& opts);
// corpus + entropy lines -> tier lines.
StageReport RunClassify(const Path& corpus, const Path& entropy, const Path& out,
                        const RunOptions& opts);
// corpus -> quality lines, or {"id", "error"} lines for samples the service
// could not score. Needs a stub or an endpoint.
StageReport RunAssess(const Path& corpus, const Path& out, const RunOptions& opts);
// corpus + entropy + quality -> kept corpus and {"id", "reason"} drop lines.
StageReport RunFilter(const Path& corpus, const Path& entropy, const Path& quality,
                      const Path& out, const Path& drops, const RunOptions& opts);

struct CurriculumRequest {
  Stage stage = Stage::kS1;
  double progress = 0.0;
  std::optional<std::size_t> size;
  std::string schedule = "linear";
};
// tier lines -> manifest lines.
StageReport RunCurriculum(const Path& tiers, const Path& out,
                          const CurriculumRequest& request, const RunOptions& opts);
// corpus + {"id", "response"} lines -> reward lines.
StageReport RunReward(const Path& corpus, const Path& responses, const Path& out,
                      const RunOptions& opts);
// group fixture lines -> objective breakdown lines.
StageReport RunGrpo(const Path& fixtures, const Path& out, const RunOptions& opts);

// Writes one {"name", "op", "max_abs_diff", "pass", "error"?} line per case.
// `passed` is false when any case fails.
StageReport RunFusionVerify(const Path& fixture, const Path& out, bool& passed);
StageReport RunFusionGenerate(const Path& out, const RunOptions& opts);

enum class StatsMode { kDistribution, kNormalize, kTiers };
enum class StatsFormat { kText, kJsonl };
std::optional<StatsMode> ParseStatsMode(std::string_view text);
std::optional<StatsFormat> ParseStatsFormat(std::string_view text);

// distribution: corpus lines -> per-dataset table.
// normalize: {"name", "score"} lines -> normalized scores.
// tiers: tier lines -> tier histogram.
StageReport RunStats(StatsMode mode, const Path& input, StatsFormat format,
                     const Path& out, const RunOptions& opts);

// Writes `count` synthetic samples to dir/corpus.jsonl with raw depth payloads
// under dir/depth/. Samples span all four tiers.
StageReport GenerateSyntheticCorpus(const Path& dir, std::size_t count,
                                    const RunOptions& opts);

// In-memory variant used by GenerateSyntheticCorpus and the benchmarks.
struct SyntheticSample {
  VqaSample sample;
  DepthMap depth;
};
SyntheticSample MakeSyntheticSample(std::size_t index, std::uint64_t seed);

}  // namespace curate
