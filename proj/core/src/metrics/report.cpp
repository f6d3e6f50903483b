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

#include "d3/metrics/report.hpp"

#include "d3/common/error.hpp"
#include "d3/metrics/bleu.hpp"
#include "d3/metrics/cscore.hpp"
#include "d3/metrics/diversity.hpp"

namespace d3::metrics {

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json out;
  out["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values) out["metrics"][k] = v;
  out["metadata"] = metadata;
  return out;
}

MetricsReport evaluate_responses(const std::vector<corpus::Utterance>& hypotheses,
                                 const std::vector<corpus::Utterance>& references,
                                 const std::vector<std::vector<corpus::PersonaSentence>>& personas,
                                 const gateway::EntailmentScorer* nli, const gateway::SimilarityScorer* similarity) {
  MetricsReport report;
  const auto hyp = tokens_of(hypotheses);
  for (std::size_t n = 1; n <= 3; ++n) {
    report.values["distinct_" + std::to_string(n)] = distinct_n(hyp, n);
    report.values["entropy_" + std::to_string(n)] = entropy_n(hyp, n);
  }
  report.metadata["n_hypotheses"] = hypotheses.size();

  if (!references.empty()) {
    if (references.size() != hypotheses.size()) throw ValidationError("one reference per hypothesis required");
    std::vector<std::vector<Tokens>> refs;
    for (const auto& r : references) refs.push_back({r.tokens()});
    report.values["bleu"] = corpus_bleu(hyp, refs);
    report.values["nist_4"] = corpus_nist(hyp, refs, 4);
    if (similarity && !hyp.empty()) {
      double sum = 0.0;
      for (std::size_t i = 0; i < hyp.size(); ++i) sum += similarity->similarity(hyp[i], refs[i][0]);
      report.values["similarity_f"] = sum / static_cast<double>(hyp.size());
      report.metadata["similarity_backend"] = similarity->name();
    }
  }
  if (!personas.empty() && nli) {
    report.values["c_score"] = c_score(hypotheses, personas, *nli);
    report.metadata["nli_backend"] = nli->name();
  }
  return report;
}

void add_novelty(MetricsReport& report, const std::vector<Tokens>& candidate, const std::vector<Tokens>& reference,
                 bool per_sample) {
  for (std::size_t n = 1; n <= 4; ++n)
    report.values["novelty_" + std::to_string(n)] =
        per_sample ? novelty_n_per_sample(candidate, reference, n) : novelty_n(candidate, reference, n);
  report.metadata["novelty_mode"] = per_sample ? "per_sample" : "corpus";
}

void add_attention(MetricsReport& report, const std::vector<AttentionRecord>& records) {
  if (records.empty()) return;
  double at = 0.0, as = 0.0;
  std::size_t with_pairs = 0;
  for (const auto& r : records) {
    auto c = consistent_attention(r);
    as += c.sentence_level;
    if (c.token_level) {
      at += *c.token_level;
      ++with_pairs;
    }
  }
  report.values["a_s"] = as / static_cast<double>(records.size());
  if (with_pairs) report.values["a_t"] = at / static_cast<double>(with_pairs);
  report.metadata["attention_records"] = records.size();
}

}  // namespace d3::metrics
