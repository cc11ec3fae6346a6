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

// curate: command-line front end over the C API.
//
//   curate [global options] <subcommand> [options]
//
// Exit codes: 0 ok, 1 usage or config error, 2 data error, 3 service error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curate/curate.h"

namespace {

constexpr int kMaxReportedErrors = 20;

struct ContextDeleter {
  void operator()(curate_context* ctx) const { curate_context_free(ctx); }
};
using Context = std::unique_ptr<curate_context, ContextDeleter>;

int ExitCode(curate_status status) {
  switch (status) {
    case CURATE_OK:
      return 0;
    case CURATE_INVALID_ARGUMENT:
      return 1;
    case CURATE_SERVICE:
      return 3;
    case CURATE_DATA:
    case CURATE_INTERNAL:
      break;
  }
  return 2;
}

int Report(curate_context* ctx, curate_status status) {
  const size_t n = curate_record_error_count(ctx);
  for (size_t i = 0; i < n && i < kMaxReportedErrors; ++i) {
    std::cerr << "curate: " << curate_record_error(ctx, i) << "\n";
  }
  if (n > kMaxReportedErrors) {
    std::cerr << "curate: ... " << (n - kMaxReportedErrors) << " more record error(s)\n";
  }
  for (size_t i = 0; i < curate_warning_count(ctx); ++i) {
    std::cerr << "curate: warning: " << curate_warning(ctx, i) << "\n";
  }
  if (status != CURATE_OK) std::cerr << "curate: error: " << curate_last_error(ctx) << "\n";
  return ExitCode(status);
}

// "seed=<n>[,fail_every=<k>]"
bool ParseStub(const std::string& text, uint64_t& seed, size_t& fail_every) {
  bool have_seed = false;
  fail_every = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    const size_t eq = item.find('=');
    if (eq == std::string::npos) return false;
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
      return false;
    }
    const unsigned long long v = std::strtoull(value.c_str(), nullptr, 10);
    if (key == "seed") {
      seed = v;
      have_seed = true;
    } else if (key == "fail_every") {
      fail_every = static_cast<size_t>(v);
    } else {
      return false;
    }
  }
  return have_seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curate: entropy-driven curation, rewards and numeric oracles for VQA corpora"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path;
  uint64_t seed = 0;
  size_t jobs = 1;
  std::string endpoint;
  std::string stub;
  app.add_option("--config", config_path,
                 "Config file of key = value lines, or \"defaults\"");
  app.add_option("--seed", seed, "Seed for every random choice");
  app.add_option("--jobs", jobs, "Maximum worker threads")->check(CLI::PositiveNumber);
  app.add_option("--quality-endpoint", endpoint,
                 "Assessment service URL (default: $CURATE_QUALITY_ENDPOINT)");
  app.add_option("--quality-stub", stub,
                 "Offline judge instead of a service: seed=<n>[,fail_every=<k>]");

  const size_t n_keys = curate_config_key_count();
  std::vector<std::string> overrides(n_keys);
  std::vector<CLI::Option*> override_opts(n_keys);
  for (size_t i = 0; i < n_keys; ++i) {
    const std::string key = curate_config_key_name(i);
    override_opts[i] = app.add_option("--" + key, overrides[i], "Override config " + key)
                           ->group("Config overrides");
  }

  std::string out = "-";
  std::string corpus, entropy, quality, drops = "drops.jsonl", tiers, responses, fixtures;

  auto* score = app.add_subcommand("score", "corpus -> entropy lines");
  score->add_option("--corpus", corpus, "Sample corpus (JSONL)")->required();
  score->add_option("--out", out, "Output path, - for stdout");

  auto* classify = app.add_subcommand("classify", "corpus + entropy lines -> tier lines");
  classify->add_option("--corpus", corpus, "Sample corpus (JSONL)")->required();
  classify->add_option("--entropy", entropy, "Entropy lines, - for stdin")->required();
  classify->add_option("--out", out, "Output path, - for stdout");

  auto* assess = app.add_subcommand("assess", "corpus -> quality lines");
  assess->add_option("--corpus", corpus, "Sample corpus (JSONL)")->required();
  assess->add_option("--out", out, "Output path, - for stdout");

  auto* filter = app.add_subcommand("filter", "entropy + quality -> kept corpus + drop report");
  filter->add_option("--corpus", corpus, "Sample corpus (JSONL)")->required();
  filter->add_option("--entropy", entropy, "Entropy lines")->required();
  filter->add_option("--quality", quality, "Quality lines")->required();
  filter->add_option("--out", out, "Kept corpus, - for stdout");
  filter->add_option("--drops", drops, "Drop report")->capture_default_str();

  std::string stage = "S1", schedule = "linear";
  double progress = 0.0;
  int64_t size = -1;
  auto* curriculum = app.add_subcommand("curriculum", "tier lines -> stage manifest");
  curriculum->add_option("--tiers", tiers, "Tier lines, - for stdin")->required();
  curriculum->add_option("--stage", stage, "S1, S2, S3 or S4")->capture_default_str();
  curriculum->add_option("--progress", progress, "Stage 3 progress in [0, 1]")
      ->capture_default_str();
  curriculum->add_option("--size", size, "Manifest size (default: largest feasible)");
  curriculum->add_option("--schedule", schedule, "Stage 3 ramp: linear or cosine")
      ->capture_default_str();
  curriculum->add_option("--out", out, "Output path, - for stdout");

  auto* reward = app.add_subcommand("reward", "responses + corpus -> reward lines");
  reward->add_option("--corpus", corpus, "Sample corpus (JSONL)")->required();
  reward->add_option("--responses", responses, "{\"id\", \"response\"} lines")->required();
  reward->add_option("--out", out, "Output path, - for stdout");

  auto* grpo = app.add_subcommand("grpo", "group fixtures -> objective breakdown");
  grpo->add_option("--fixtures", fixtures, "Group fixture lines")->required();
  grpo->add_option("--out", out, "Output path, - for stdout");

  auto* fusion = app.add_subcommand("fusion", "Fusion-layer reference ops");
  fusion->require_subcommand(1);
  std::string fixture;
  auto* verify = fusion->add_subcommand("verify", "Recompute a fixture and diff");
  verify->add_option("fixture", fixture, "Fixture JSON")->required();
  verify->add_option("--out", out, "Per-case report, - for stdout");
  auto* generate = fusion->add_subcommand("generate", "Write a seeded fixture");
  generate->add_option("--out", out, "Output path, - for stdout");

  std::string mode, input, format = "text";
  auto* stats = app.add_subcommand("stats", "Distribution, normalization and tier tables");
  stats->add_option("mode", mode, "distribution, normalize or tiers")
      ->required()
      ->check(CLI::IsMember({"distribution", "normalize", "tiers"}));
  stats->add_option("--input", input, "Input lines")->required();
  stats->add_option("--format", format, "text or jsonl")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "jsonl"}));
  stats->add_option("--out", out, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "curate: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  Context holder(curate_context_new());
  curate_context* ctx = holder.get();
  if (ctx == nullptr) {
    std::cerr << "curate: out of memory\n";
    return 2;
  }
  if (!config_path.empty()) {
    if (auto s = curate_config_load(ctx, config_path.c_str()); s != CURATE_OK) {
      return Report(ctx, s);
    }
  }
  for (size_t i = 0; i < n_keys; ++i) {
    if (override_opts[i]->count() == 0) continue;
    if (auto s = curate_config_set(ctx, curate_config_key_name(i), overrides[i].c_str());
        s != CURATE_OK) {
      return Report(ctx, s);
    }
  }
  if (auto s = curate_config_validate(ctx); s != CURATE_OK) return Report(ctx, s);
  curate_set_seed(ctx, seed);
  curate_set_jobs(ctx, jobs);
  if (endpoint.empty()) {
    if (const char* env = std::getenv("CURATE_QUALITY_ENDPOINT")) endpoint = env;
  }
  if (!endpoint.empty()) {
    if (auto s = curate_set_quality_endpoint(ctx, endpoint.c_str()); s != CURATE_OK) {
      return Report(ctx, s);
    }
  }
  if (!stub.empty()) {
    uint64_t stub_seed = 0;
    size_t fail_every = 0;
    if (!ParseStub(stub, stub_seed, fail_every)) {
      std::cerr << "curate: --quality-stub expects seed=<n>[,fail_every=<k>]\n";
      return 1;
    }
    curate_set_quality_stub(ctx, stub_seed, fail_every);
  }

  const char* o = out.c_str();
  curate_status status = CURATE_OK;
  if (*score) {
    status = curate_score(ctx, corpus.c_str(), o);
  } else if (*classify) {
    status = curate_classify(ctx, corpus.c_str(), entropy.c_str(), o);
  } else if (*assess) {
    status = curate_assess(ctx, corpus.c_str(), o);
  } else if (*filter) {
    status = curate_filter(ctx, corpus.c_str(), entropy.c_str(), quality.c_str(), o,
                           drops.c_str());
  } else if (*curriculum) {
    status = curate_curriculum(ctx, tiers.c_str(), o, stage.c_str(), progress, size,
                               schedule.c_str());
  } else if (*reward) {
    status = curate_reward(ctx, corpus.c_str(), responses.c_str(), o);
  } else if (*grpo) {
    status = curate_grpo(ctx, fixtures.c_str(), o);
  } else if (*verify) {
    status = curate_fusion_verify(ctx, fixture.c_str(), o);
  } else if (*generate) {
    status = curate_fusion_generate(ctx, o);
  } else if (*stats) {
    status = curate_stats(ctx, mode.c_str(), input.c_str(), format.c_str(), o);
  }
  return Report(ctx, status);
}
