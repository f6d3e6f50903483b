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

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "d3/corpus/sentence.hpp"
#include "d3/gateway/backends.hpp"
#include "d3/metrics/attention.hpp"
#include "d3/metrics/ngram.hpp"

namespace d3::metrics {

// Corpus-level numbers keyed by metric name (distinct_1, entropy_2, bleu,
// nist_4, c_score, similarity_f, novelty_3, a_t, a_s, ...) plus free-form
// metadata such as corpus digests and backend names.
struct MetricsReport {
  std::map<std::string, double> values;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

// Diversity metrics of the hypotheses always; BLEU / NIST-4 / similarity_f
// when references are given; C-score when personas and an NLI scorer are
// given. Reference and persona lists, when non-empty, align with hypotheses.
MetricsReport evaluate_responses(const std::vector<corpus::Utterance>& hypotheses,
                                 const std::vector<corpus::Utterance>& references,
                                 const std::vector<std::vector<corpus::PersonaSentence>>& personas,
                                 const gateway::EntailmentScorer* nli, const gateway::SimilarityScorer* similarity);

// novelty_1..novelty_4 of `candidate` against `reference`.
void add_novelty(MetricsReport& report, const std::vector<Tokens>& candidate, const std::vector<Tokens>& reference,
                 bool per_sample = false);

// Mean a_t over records that have overlap pairs, mean a_s over all records.
void add_attention(MetricsReport& report, const std::vector<AttentionRecord>& records);

}  // namespace d3::metrics
