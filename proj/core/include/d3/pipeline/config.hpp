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

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "d3/diversify/diversify.hpp"
#include "d3/gateway/registry.hpp"

namespace d3::pipeline {

struct IoConfig {
  std::string input;       // corpus (.txt ConvAI2 or .jsonl)
  std::string output_dir = "out";
  std::string dev;         // optional; the hard phase evaluates on the corpus itself when empty
  std::string dev_easy;    // optional; derived from `dev` when empty

  friend bool operator==(const IoConfig&, const IoConfig&) = default;
};

struct CurriculumConfig {
  std::string variant = "d3";
  std::string trainer = "unigram-lm";
  std::size_t patience_easy = 15;
  std::size_t patience_hard = 15;
  std::size_t max_epochs = 200;

  friend bool operator==(const CurriculumConfig&, const CurriculumConfig&) = default;
};

struct Config {
  IoConfig io;
  double tau = 0.99;
  diversify::DiversifyConfig diversify;
  CurriculumConfig curriculum;
  gateway::BackendSpec backends;
};

bool operator==(const Config& a, const Config& b);

// Strict: unknown tables or keys, wrong types and out-of-range values raise
// ValidationError naming the dotted key (e.g. "diversify.alpha").
Config config_from_json(const nlohmann::ordered_json& root);
nlohmann::ordered_json config_to_json(const Config& config);

// Format chosen by content: a leading '{' means JSON, otherwise TOML.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

// The full effective config as TOML; parse_config(dump_config(c)) == c.
std::string dump_config(const Config& config);

// SHA-256 of dump_config.
std::string config_digest(const Config& config);

// All cross-field checks (ranges, beta + gamma <= 1, known variant).
void validate(const Config& config);

}  // namespace d3::pipeline
