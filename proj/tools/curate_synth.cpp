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

// curate-synth: writes a seeded synthetic corpus (JSONL plus raw depth
// payloads) that exercises every tier and task kind.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "curate/curate.h"

int main(int argc, char** argv) {
  CLI::App app{"curate-synth: generate a synthetic VQA corpus"};
  std::string dir;
  size_t count = 20;
  uint64_t seed = 7;
  app.add_option("--out-dir", dir, "Output directory")->required();
  app.add_option("--count", count, "Number of samples")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "curate-synth: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  curate_context* ctx = curate_context_new();
  curate_set_seed(ctx, seed);
  const curate_status status = curate_synth(ctx, dir.c_str(), count);
  if (status != CURATE_OK) {
    std::cerr << "curate-synth: " << curate_last_error(ctx) << "\n";
  }
  curate_context_free(ctx);
  return status == CURATE_OK ? 0 : 2;
}
