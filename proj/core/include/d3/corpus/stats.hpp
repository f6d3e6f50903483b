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

#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "d3/corpus/samples.hpp"

namespace d3::corpus {

struct DatasetStats {
  std::size_t n_samples = 0;
  std::size_t n_unique_personas = 0;
  std::size_t n_unique_tokens = 0;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

// Mergeable partial counts, so stats can be computed per shard.
class StatsAccumulator {
 public:
  void add_sample(std::span<const PersonaSentence> persona, std::span<const Utterance> others);
  void merge(const StatsAccumulator& other);
  DatasetStats finish() const;

 private:
  std::size_t samples_ = 0;
  std::unordered_set<std::string> personas_;
  std::unordered_set<std::string> tokens_;
};

DatasetStats compute_stats(const std::vector<DialogueSample>& samples, std::size_t jobs = 1);
DatasetStats compute_stats(const std::vector<DistilledSample>& samples, std::size_t jobs = 1);

}  // namespace d3::corpus
