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
#include <vector>

#include "d3/corpus/samples.hpp"
#include "d3/gateway/backends.hpp"

namespace d3::distill {

inline constexpr double kDefaultTau = 0.99;

// Indices k (ascending) whose persona sentence the response entails with
// probability >= tau. The scorer is queried as premise = response,
// hypothesis = persona.
std::vector<std::size_t> distill_persona(const corpus::DialogueSample& sample,
                                         const gateway::EntailmentScorer& nli, double tau);

// The last history utterance, returned by reference.
const corpus::Utterance& distill_history(const corpus::DialogueSample& sample);

// One distilled sample per entailed persona sentence, in input order then
// persona index. A sample may yield none, one or several.
std::vector<corpus::DistilledSample> distill_dataset(const std::vector<corpus::DialogueSample>& samples,
                                                     const gateway::EntailmentScorer& nli, double tau,
                                                     std::size_t jobs = 1);

}  // namespace d3::distill
