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

#include "d3/metrics/cscore.hpp"

#include "d3/common/error.hpp"

namespace d3::metrics {

double c_score(const corpus::Utterance& response, const std::vector<corpus::PersonaSentence>& persona,
               const gateway::EntailmentScorer& nli) {
  double c = 0.0;
  for (const auto& p : persona) {
    switch (nli.entail(response, p).label) {
      case gateway::EntailmentLabel::entail: c += 1.0; break;
      case gateway::EntailmentLabel::contradict: c -= 1.0; break;
      case gateway::EntailmentLabel::neutral: break;
    }
  }
  return c;
}

double c_score(const std::vector<corpus::Utterance>& responses,
               const std::vector<std::vector<corpus::PersonaSentence>>& personas,
               const gateway::EntailmentScorer& nli) {
  if (responses.size() != personas.size()) throw ValidationError("C-score needs one persona set per response");
  if (responses.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < responses.size(); ++i) sum += c_score(responses[i], personas[i], nli);
  return sum / static_cast<double>(responses.size());
}

}  // namespace d3::metrics
