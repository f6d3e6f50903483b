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
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "d3/corpus/samples.hpp"

namespace d3::curriculum {

enum class Variant { d3, original, only_augment, shuffle, reverse };

const char* to_string(Variant v);
// Throws ValidationError for unknown names.
Variant parse_variant(const std::string& name);

// A named, immutable training or dev set. Derived samples are held in their
// original-format view (L = M = 1).
struct Dataset {
  std::string name;
  std::vector<corpus::DialogueSample> samples;

  // SHA-256 of the dataset's JSONL serialization.
  std::string digest() const;
};

using DatasetRef = std::shared_ptr<const Dataset>;

struct Phase {
  std::string name;
  DatasetRef train;
  DatasetRef dev;
  std::size_t patience = 0;
};

struct CurriculumPlan {
  Variant variant = Variant::d3;
  std::vector<Phase> phases;
  std::uint64_t seed = 0;

  // Phase order, dataset names/sizes/digests and the seed.
  nlohmann::ordered_json manifest() const;
};

// d3: [easy(augmented), hard(original)]; reverse: [hard, easy];
// original: [hard]; only_augment: [easy]; shuffle: one phase over a seeded
// permutation of original + augmented evaluated on the original dev set.
// Easy phases use `dev_easy`, the augmented dev set.
CurriculumPlan build_plan(Variant variant, const DatasetRef& original, const DatasetRef& augmented,
                          const DatasetRef& dev, const DatasetRef& dev_easy, std::size_t patience_easy,
                          std::size_t patience_hard, std::uint64_t seed);

}  // namespace d3::curriculum
