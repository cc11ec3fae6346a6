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

#include "curate/curate.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "curate/config.hpp"
#include "curate/entropy.hpp"
#include "curate/error.hpp"
#include "curate/grpo.hpp"
#include "curate/pipeline.hpp"
#include "curate/quality.hpp"
#include "curate/reward.hpp"
#include "curate/stats.hpp"
#include "curate/taxonomy.hpp"

struct curate_context {
  curate::RunOptions options;
  std::string last_error;
  std::vector<std::string> record_errors;
  std::vector<std::string> warnings;
};

namespace {

using curate::Error;
using curate::ErrorKind;

curate_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return CURATE_INVALID_ARGUMENT;
    case ErrorKind::kData:
      return CURATE_DATA;
    case ErrorKind::kService:
      return CURATE_SERVICE;
  }
  return CURATE_INTERNAL;
}

// Runs `fn` with exceptions mapped to status codes and recorded on ctx.
template <typename Fn>
curate_status Guard(curate_context* ctx, Fn&& fn) {
  if (ctx == nullptr) return CURATE_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    return fn();
  } catch (const Error& e) {
    ctx->last_error = e.what();
    return StatusOf(e.kind());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return CURATE_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return CURATE_INTERNAL;
  }
}

const char* Need(const char* s, const char* name) {
  if (s == nullptr) throw curate::InvalidArgument(std::string(name) + " must not be null");
  return s;
}

template <typename T>
T* NeedPtr(T* p, const char* name) {
  if (p == nullptr) throw curate::InvalidArgument(std::string(name) + " must not be null");
  return p;
}

// Stage wrapper: stores the report and maps leftover record errors to DATA.
template <typename Fn>
curate_status Stage(curate_context* ctx, Fn&& fn) {
  if (ctx != nullptr) {
    ctx->record_errors.clear();
    ctx->warnings.clear();
  }
  return Guard(ctx, [&]() -> curate_status {
    curate::StageReport report = fn();
    ctx->record_errors = std::move(report.record_errors);
    ctx->warnings = std::move(report.warnings);
    if (report.service_failures > 0) {
      ctx->last_error = std::to_string(report.service_failures) +
                        " sample(s) could not be assessed";
      return CURATE_SERVICE;
    }
    if (!ctx->record_errors.empty()) {
      ctx->last_error = std::to_string(ctx->record_errors.size()) +
                        " record error(s); first: " + ctx->record_errors.front();
      return CURATE_DATA;
    }
    return CURATE_OK;
  });
}

}  // namespace

extern "C" {

const char* curate_version(void) { return "1.0.0"; }

curate_context* curate_context_new(void) {
  try {
    return new curate_context();
  } catch (...) {
    return nullptr;
  }
}

void curate_context_free(curate_context* ctx) { delete ctx; }

const char* curate_last_error(const curate_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->last_error.c_str();
}

size_t curate_record_error_count(const curate_context* ctx) {
  return ctx == nullptr ? 0 : ctx->record_errors.size();
}

const char* curate_record_error(const curate_context* ctx, size_t index) {
  if (ctx == nullptr || index >= ctx->record_errors.size()) return nullptr;
  return ctx->record_errors[index].c_str();
}

size_t curate_warning_count(const curate_context* ctx) {
  return ctx == nullptr ? 0 : ctx->warnings.size();
}

const char* curate_warning(const curate_context* ctx, size_t index) {
  if (ctx == nullptr || index >= ctx->warnings.size()) return nullptr;
  return ctx->warnings[index].c_str();
}

curate_status curate_config_load(curate_context* ctx, const char* path) {
  return Guard(ctx, [&] {
    curate::PipelineConfig config;
    config.LoadFile(Need(path, "path"));
    ctx->options.config = std::move(config);
    return CURATE_OK;
  });
}

curate_status curate_config_set(curate_context* ctx, const char* key, const char* value) {
  return Guard(ctx, [&] {
    ctx->options.config.Set(Need(key, "key"), Need(value, "value"));
    return CURATE_OK;
  });
}

curate_status curate_config_get(curate_context* ctx, const char* key, char* buf,
                                size_t buf_size, size_t* needed) {
  return Guard(ctx, [&] {
    const std::string value = ctx->options.config.Get(Need(key, "key"));
    if (needed != nullptr) *needed = value.size() + 1;
    if (buf == nullptr || buf_size < value.size() + 1) {
      throw curate::InvalidArgument("buffer too small for config value");
    }
    std::memcpy(buf, value.c_str(), value.size() + 1);
    return CURATE_OK;
  });
}

size_t curate_config_key_count(void) { return curate::PipelineConfig::Keys().size(); }

const char* curate_config_key_name(size_t index) {
  const auto& keys = curate::PipelineConfig::Keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

curate_status curate_config_validate(curate_context* ctx) {
  return Guard(ctx, [&] {
    const auto violations = ctx->options.config.Validate();
    if (violations.empty()) return CURATE_OK;
    std::string message = "invalid config:";
    for (const auto& v : violations) message += " " + v.field + " (" + v.constraint + ");";
    message.pop_back();
    throw curate::InvalidArgument(message);
  });
}

void curate_set_seed(curate_context* ctx, uint64_t seed) {
  if (ctx != nullptr) ctx->options.seed = seed;
}

void curate_set_jobs(curate_context* ctx, size_t jobs) {
  if (ctx != nullptr) ctx->options.jobs = jobs == 0 ? 1 : jobs;
}

curate_status curate_set_quality_endpoint(curate_context* ctx, const char* endpoint) {
  return Guard(ctx, [&] {
    std::string e = Need(endpoint, "endpoint");
    if (e.rfind("http://", 0) != 0 && e.rfind("https://", 0) != 0) {
      throw curate::InvalidArgument("quality endpoint must start with http:// or https://");
    }
    ctx->options.quality_endpoint = std::move(e);
    return CURATE_OK;
  });
}

void curate_set_quality_stub(curate_context* ctx, uint64_t seed, size_t fail_every) {
  if (ctx == nullptr) return;
  curate::StubAssessmentClient::Options stub;
  stub.seed = seed;
  stub.transient_every = fail_every;
  ctx->options.quality_stub = stub;
}

void curate_set_retry_sleep(curate_context* ctx, int enabled) {
  if (ctx == nullptr) return;
  if (enabled) {
    ctx->options.sleep = curate::RealSleep;
  } else {
    ctx->options.sleep = [](std::chrono::milliseconds) {};
  }
}

curate_status curate_score(curate_context* ctx, const char* corpus, const char* out) {
  return Stage(ctx, [&] {
    return curate::RunScore(Need(corpus, "corpus"), Need(out, "out"), ctx->options);
  });
}

curate_status curate_classify(curate_context* ctx, const char* corpus, const char* entropy,
                              const char* out) {
  return Stage(ctx, [&] {
    return curate::RunClassify(Need(corpus, "corpus"), Need(entropy, "entropy"),
                               Need(out, "out"), ctx->options);
  });
}

curate_status curate_assess(curate_context* ctx, const char* corpus, const char* out) {
  return Stage(ctx, [&] {
    return curate::RunAssess(Need(corpus, "corpus"), Need(out, "out"), ctx->options);
  });
}

curate_status curate_filter(curate_context* ctx, const char* corpus, const char* entropy,
                            const char* quality, const char* out, const char* drops) {
  return Stage(ctx, [&] {
    return curate::RunFilter(Need(corpus, "corpus"), Need(entropy, "entropy"),
                             Need(quality, "quality"), Need(out, "out"),
                             Need(drops, "drops"), ctx->options);
  });
}

curate_status curate_curriculum(curate_context* ctx, const char* tiers, const char* out,
                                const char* stage, double progress, int64_t size,
                                const char* schedule) {
  return Stage(ctx, [&] {
    curate::CurriculumRequest request;
    auto parsed = curate::ParseStage(Need(stage, "stage"));
    if (!parsed) throw curate::InvalidArgument("unknown stage \"" + std::string(stage) + "\"");
    request.stage = *parsed;
    request.progress = progress;
    if (size >= 0) request.size = static_cast<std::size_t>(size);
    request.schedule = Need(schedule, "schedule");
    return curate::RunCurriculum(Need(tiers, "tiers"), Need(out, "out"), request,
                                 ctx->options);
  });
}

curate_status curate_reward(curate_context* ctx, const char* corpus, const char* responses,
                            const char* out) {
  return Stage(ctx, [&] {
    return curate::RunReward(Need(corpus, "corpus"), Need(responses, "responses"),
                             Need(out, "out"), ctx->options);
  });
}

curate_status curate_grpo(curate_context* ctx, const char* fixtures, const char* out) {
  return Stage(ctx, [&] {
    return curate::RunGrpo(Need(fixtures, "fixtures"), Need(out, "out"), ctx->options);
  });
}

curate_status curate_fusion_verify(curate_context* ctx, const char* fixture,
                                   const char* out) {
  bool passed = true;
  curate_status status = Stage(ctx, [&] {
    return curate::RunFusionVerify(Need(fixture, "fixture"), Need(out, "out"), passed);
  });
  if (status == CURATE_OK && !passed) {
    ctx->last_error = "fusion fixture mismatch";
    return CURATE_DATA;
  }
  return status;
}

curate_status curate_fusion_generate(curate_context* ctx, const char* out) {
  return Stage(ctx, [&] { return curate::RunFusionGenerate(Need(out, "out"), ctx->options); });
}

curate_status curate_stats(curate_context* ctx, const char* mode, const char* input,
                           const char* format, const char* out) {
  return Stage(ctx, [&] {
    auto m = curate::ParseStatsMode(Need(mode, "mode"));
    if (!m) {
      throw curate::InvalidArgument("unknown stats mode \"" + std::string(mode) +
                                    "\" (expected distribution, normalize or tiers)");
    }
    auto f = curate::ParseStatsFormat(Need(format, "format"));
    if (!f) {
      throw curate::InvalidArgument("unknown format \"" + std::string(format) +
                                    "\" (expected text or jsonl)");
    }
    return curate::RunStats(*m, Need(input, "input"), *f, Need(out, "out"), ctx->options);
  });
}

curate_status curate_synth(curate_context* ctx, const char* dir, size_t count) {
  return Stage(ctx, [&] {
    return curate::GenerateSyntheticCorpus(Need(dir, "dir"), count, ctx->options);
  });
}

curate_status curate_depth_entropy(curate_context* ctx, const float* depth, size_t width,
                                   size_t height, double* out) {
  return Guard(ctx, [&] {
    NeedPtr(out, "out");
    curate::DepthMap map;
    map.width = width;
    map.height = height;
    if (width * height > 0) {
      NeedPtr(depth, "depth");
      map.values.assign(depth, depth + width * height);
    }
    *out = curate::ComputeDepthEntropy(map, ctx->options.config.entropy);
    return CURATE_OK;
  });
}

curate_status curate_entropy_3d(curate_context* ctx, const double* xyz, size_t n,
                                double* out) {
  return Guard(ctx, [&] {
    NeedPtr(out, "out");
    if (n > 0) NeedPtr(xyz, "xyz");
    std::vector<curate::Object3D> objects(n);
    for (size_t i = 0; i < n; ++i) {
      objects[i].center = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
    }
    *out = curate::Compute3dEntropy(objects, ctx->options.config.entropy);
    return CURATE_OK;
  });
}

curate_status curate_classify_tier(curate_context* ctx, double h_total,
                                   const char* const* tags, size_t n_tags, int* tier) {
  return Guard(ctx, [&] {
    NeedPtr(tier, "tier");
    std::set<std::string> tag_set;
    for (size_t i = 0; i < n_tags; ++i) {
      std::string t = Need(NeedPtr(tags, "tags")[i], "tag");
      for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      tag_set.insert(std::move(t));
    }
    *tier = static_cast<int>(
        curate::ClassifyTier(h_total, tag_set, ctx->options.config.taxonomy));
    return CURATE_OK;
  });
}

curate_status curate_retain(curate_context* ctx, double h_total, double mean_score,
                            int* keep, const char** reason) {
  return Guard(ctx, [&] {
    NeedPtr(keep, "keep");
    const auto decision = curate::Retain(h_total, mean_score, ctx->options.config.filter);
    *keep = decision.keep ? 1 : 0;
    if (reason != nullptr) {
      *reason = decision.reason ? curate::ToString(*decision.reason).data() : "";
    }
    return CURATE_OK;
  });
}

curate_status curate_score_iou(curate_context* ctx, const double pred[4],
                               const double gt[4], double* out) {
  return Guard(ctx, [&] {
    NeedPtr(pred, "pred");
    NeedPtr(gt, "gt");
    NeedPtr(out, "out");
    *out = curate::ScoreIou({pred[0], pred[1], pred[2], pred[3]},
                            {gt[0], gt[1], gt[2], gt[3]})
               .value;
    return CURATE_OK;
  });
}

curate_status curate_compute_reward(curate_context* ctx, const char* response,
                                    const char* answer, const char* task_kind,
                                    double* r_format, double* r_correct, double* r_total) {
  return Guard(ctx, [&] {
    curate::VqaSample sample;
    sample.id = "inline";
    sample.answer = Need(answer, "answer");
    auto kind = curate::ParseTaskKind(Need(task_kind, "task_kind"));
    if (!kind) {
      throw curate::InvalidArgument("unknown task kind \"" + std::string(task_kind) + "\"");
    }
    sample.task_kind = *kind;
    const auto r =
        curate::ComputeReward(Need(response, "response"), sample, ctx->options.config.reward);
    if (r_format != nullptr) *r_format = r.r_format;
    if (r_correct != nullptr) *r_correct = r.r_correct;
    if (r_total != nullptr) *r_total = r.r_total;
    return CURATE_OK;
  });
}

curate_status curate_group_advantages(curate_context* ctx, const double* rewards, size_t n,
                                      double* out) {
  return Guard(ctx, [&] {
    if (n > 0) {
      NeedPtr(rewards, "rewards");
      NeedPtr(out, "out");
    }
    const auto a = curate::GroupAdvantages(std::span<const double>(rewards, n),
                                           ctx->options.config.reward.advantage_eps);
    std::copy(a.begin(), a.end(), out);
    return CURATE_OK;
  });
}

curate_status curate_normalize_scores(curate_context* ctx, const double* scores, size_t n,
                                      double* out) {
  return Guard(ctx, [&] {
    if (n > 0) {
      NeedPtr(scores, "scores");
      NeedPtr(out, "out");
    }
    const auto r = curate::NormalizeScores(std::span<const double>(scores, n),
                                           ctx->options.config.normalize_eps);
    std::copy(r.values.begin(), r.values.end(), out);
    return CURATE_OK;
  });
}

}  // extern "C"
