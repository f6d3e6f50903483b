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

#include "d3/distill/distill.hpp"

#include "d3/common/error.hpp"
#include "d3/common/parallel.hpp"

namespace d3::distill {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("tau must lie in (0, 1]", "tau");
}

}  // namespace

std::vector<std::size_t> distill_persona(const corpus::DialogueSample& sample,
                                         const gateway::EntailmentScorer& nli, double tau) {
  check_tau(tau);
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < sample.persona.size(); ++k)
    if (nli.entail(sample.response, sample.persona[k]).entail_prob >= tau) kept.push_back(k);
  return kept;
}

const corpus::Utterance& distill_history(const corpus::DialogueSample& sample) {
  if (sample.history.empty()) throw ValidationError("sample has an empty history", "history");
  return sample.history.back();
}

std::vector<corpus::DistilledSample> distill_dataset(const std::vector<corpus::DialogueSample>& samples,
                                                     const gateway::EntailmentScorer& nli, double tau,
                                                     std::size_t jobs) {
  check_tau(tau);
  auto per_sample = parallel_map(samples, jobs, [&](const corpus::DialogueSample& s) {
    std::vector<corpus::DistilledSample> out;
    const auto indices = distill_persona(s, nli, tau);
    if (indices.empty()) return out;
    const auto& last = distill_history(s);
    for (auto k : indices)
      out.push_back(corpus::DistilledSample{s.persona[k], last, s.response, {s.dialogue_id, s.turn_index, k}});
    return out;
  });

  std::vector<corpus::DistilledSample> flat;
  for (auto& group : per_sample)
    for (auto& d : group) flat.push_back(std::move(d));
  return flat;
}

}  // namespace d3::distill
