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

#include "d3/corpus/stats.hpp"

#include "d3/common/parallel.hpp"

namespace d3::corpus {

void StatsAccumulator::add_sample(std::span<const PersonaSentence> persona,
                                  std::span<const Utterance> others) {
  ++samples_;
  for (const auto& p : persona) {
    personas_.insert(p.key());
    tokens_.insert(p.tokens().begin(), p.tokens().end());
  }
  for (const auto& u : others) tokens_.insert(u.tokens().begin(), u.tokens().end());
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  samples_ += other.samples_;
  personas_.insert(other.personas_.begin(), other.personas_.end());
  tokens_.insert(other.tokens_.begin(), other.tokens_.end());
}

DatasetStats StatsAccumulator::finish() const {
  return DatasetStats{samples_, personas_.size(), tokens_.size()};
}

namespace {

template <typename Sample, typename AddFn>
DatasetStats sharded(const std::vector<Sample>& samples, std::size_t jobs, AddFn add) {
  const std::size_t shards = std::max<std::size_t>(1, std::min(jobs, samples.size()));
  std::vector<StatsAccumulator> partial(shards);
  parallel_for(shards, shards, [&](std::size_t s) {
    for (std::size_t i = s; i < samples.size(); i += shards) add(partial[s], samples[i]);
  });
  StatsAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return total.finish();
}

}  // namespace

DatasetStats compute_stats(const std::vector<DialogueSample>& samples, std::size_t jobs) {
  return sharded(samples, jobs, [](StatsAccumulator& acc, const DialogueSample& s) {
    std::vector<Utterance> others = s.history;
    others.push_back(s.response);
    acc.add_sample(s.persona, others);
  });
}

DatasetStats compute_stats(const std::vector<DistilledSample>& samples, std::size_t jobs) {
  return sharded(samples, jobs, [](StatsAccumulator& acc, const DistilledSample& s) {
    const Utterance others[] = {s.history, s.response};
    acc.add_sample(std::span(&s.persona, 1), others);
  });
}

}  // namespace d3::corpus
