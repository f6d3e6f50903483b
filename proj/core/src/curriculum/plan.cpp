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

#include "d3/curriculum/plan.hpp"

#include "d3/common/digest.hpp"
#include "d3/common/error.hpp"
#include "d3/common/rng.hpp"
#include "d3/corpus/jsonl.hpp"

namespace d3::curriculum {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::d3: return "d3";
    case Variant::original: return "original";
    case Variant::only_augment: return "only_augment";
    case Variant::shuffle: return "shuffle";
    case Variant::reverse: return "reverse";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::d3, Variant::original, Variant::only_augment, Variant::shuffle, Variant::reverse}) {
    if (name == to_string(v)) return v;
  }
  throw ValidationError("unknown curriculum variant '" + name +
                            "' (expected d3, original, only_augment, shuffle or reverse)",
                        "variant");
}

std::string Dataset::digest() const {
  std::vector<corpus::Json> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(corpus::to_json(s));
  return sha256_hex(corpus::to_jsonl(rows));
}

nlohmann::ordered_json CurriculumPlan::manifest() const {
  nlohmann::ordered_json phases_json = nlohmann::ordered_json::array();
  for (const auto& p : phases) {
    phases_json.push_back({
        {"name", p.name},
        {"train", {{"name", p.train->name}, {"size", p.train->samples.size()}, {"digest", p.train->digest()}}},
        {"dev", {{"name", p.dev->name}, {"size", p.dev->samples.size()}, {"digest", p.dev->digest()}}},
        {"patience", p.patience},
    });
  }
  return {{"variant", to_string(variant)}, {"seed", seed}, {"phases", phases_json}};
}

namespace {

void require_nonempty(const DatasetRef& d, const char* role) {
  if (!d) throw ValidationError(std::string(role) + " dataset is missing", role);
  if (d->samples.empty()) throw ValidationError(std::string(role) + " dataset '" + d->name + "' is empty", role);
}

}  // namespace

CurriculumPlan build_plan(Variant variant, const DatasetRef& original, const DatasetRef& augmented,
                          const DatasetRef& dev, const DatasetRef& dev_easy, std::size_t patience_easy,
                          std::size_t patience_hard, std::uint64_t seed) {
  if (patience_easy == 0) throw ValidationError("patience must be >= 1", "patience_easy");
  if (patience_hard == 0) throw ValidationError("patience must be >= 1", "patience_hard");

  CurriculumPlan plan;
  plan.variant = variant;
  plan.seed = seed;

  const bool needs_original = variant != Variant::only_augment;
  const bool needs_augmented = variant != Variant::original;
  if (needs_original) {
    require_nonempty(original, "original");
    require_nonempty(dev, "dev");
  }
  if (needs_augmented) require_nonempty(augmented, "augmented");
  const bool needs_easy_dev = variant == Variant::d3 || variant == Variant::reverse || variant == Variant::only_augment;
  if (needs_easy_dev) require_nonempty(dev_easy, "dev_easy");

  auto easy = [&] { return Phase{"easy", augmented, dev_easy, patience_easy}; };
  auto hard = [&] { return Phase{"hard", original, dev, patience_hard}; };

  switch (variant) {
    case Variant::d3: plan.phases = {easy(), hard()}; break;
    case Variant::reverse: plan.phases = {hard(), easy()}; break;
    case Variant::original: plan.phases = {hard()}; break;
    case Variant::only_augment: plan.phases = {easy()}; break;
    case Variant::shuffle: {
      auto mixed = std::make_shared<Dataset>();
      mixed->name = "shuffled(" + original->name + "+" + augmented->name + ")";
      mixed->samples = original->samples;
      mixed->samples.insert(mixed->samples.end(), augmented->samples.begin(), augmented->samples.end());
      Rng rng(derive_seed(seed, "curriculum/shuffle"));
      rng.shuffle(mixed->samples);
      plan.phases = {Phase{"mixed", mixed, dev, patience_hard}};
      break;
    }
  }
  return plan;
}

}  // namespace d3::curriculum
