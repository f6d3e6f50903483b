// Copyright 2026 The D3 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "d3/pipeline/config.hpp"

namespace d3::pipeline {

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  // Easy curriculum is D^dis alone.
  bool no_diversify = false;
  // Easy curriculum is the original-format source of every distilled
  // sample; implies no_diversify.
  bool no_distill = false;
  // Relative paths in the config resolve against this directory.
  std::filesystem::path base_dir;
  // When set, replace io.input / io.output_dir without changing the config
  // (or its digest).
  std::filesystem::path input;
  std::filesystem::path output_dir;
};

// Runs load -> distill -> diversify -> union -> curriculum plan and writes
// into config.io.output_dir:
//   distilled.jsonl diversified.jsonl scored.jsonl skipped.jsonl
//   augmented.jsonl stats.json composition.json curriculum_plan.json
//   config.toml manifest.json
// The returned manifest (also written) carries the config digest, seed,
// stage statuses and a SHA-256 per output file. A failing stage is recorded
// as "failed_stage" and the outputs of earlier stages are kept; nothing is
// thrown for stage failures.
nlohmann::ordered_json run_pipeline(const Config& config, const RunOptions& options);

}  // namespace d3::pipeline
