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

#include <vector>

#include "d3/corpus/sentence.hpp"
#include "d3/gateway/backends.hpp"

namespace d3::metrics {

// Sum over persona sentences of +1 (entail), 0 (neutral), -1 (contradict),
// using the scorer's labels for premise = response.
double c_score(const corpus::Utterance& response, const std::vector<corpus::PersonaSentence>& persona,
               const gateway::EntailmentScorer& nli);

// Mean per-response C-score; 0 for an empty corpus.
double c_score(const std::vector<corpus::Utterance>& responses,
               const std::vector<std::vector<corpus::PersonaSentence>>& personas,
               const gateway::EntailmentScorer& nli);

}  // namespace d3::metrics
