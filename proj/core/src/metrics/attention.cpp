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

#include "d3/metrics/attention.hpp"

#include <cmath>
#include <set>

#include "d3/common/error.hpp"

namespace d3::metrics {

void AttentionRecord::validate() const {
  if (attention.empty()) throw ValidationError("attention record has zero decoding steps", "attention");
  const std::size_t cols = attention.front().size();
  for (const auto& row : attention) {
    if (row.size() != cols) throw ValidationError("ragged attention matrix", "attention");
    double sum = 0.0;
    for (double a : row) {
      if (a < 0.0) throw ValidationError("negative attention weight", "attention");
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw ValidationError("attention row does not sum to 1", "attention");
  }
  for (auto s : persona_positions)
    if (s >= cols) throw ValidationError("persona position outside the input", "persona_positions");
  const std::set<std::size_t> persona(persona_positions.begin(), persona_positions.end());
  for (auto [s, l] : overlap_pairs) {
    if (!persona.count(s)) throw ValidationError("overlap pair input position not in S", "overlap_pairs");
    if (l >= attention.size()) throw ValidationError("overlap pair response position past Y", "overlap_pairs");
  }
}

ConsistentAttention consistent_attention(const AttentionRecord& record) {
  record.validate();
  ConsistentAttention out;
  if (!record.overlap_pairs.empty()) {
    double sum = 0.0;
    for (auto [s, l] : record.overlap_pairs) sum += record.attention[l][s];
    out.token_level = sum / static_cast<double>(record.overlap_pairs.size());
  }
  double total = 0.0;
  for (const auto& row : record.attention)
    for (auto j : record.persona_positions) total += row[j];
  out.sentence_level = total / static_cast<double>(record.attention.size());
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> extract_overlap_pairs(const corpus::Tokens& input,
                                                                       const std::vector<std::size_t>& persona_positions,
                                                                       const corpus::Tokens& response,
                                                                       const gateway::PosTagger& tagger) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (auto s : persona_positions) {
    if (s >= input.size() || !tagger.is_content(input[s])) continue;
    for (std::size_t l = 0; l < response.size(); ++l)
      if (response[l] == input[s]) pairs.emplace_back(s, l);
  }
  return pairs;
}

AttentionRecord attention_record_from_json(const nlohmann::ordered_json& row, const gateway::PosTagger& tagger) {
  AttentionRecord rec;
  try {
    rec.attention = row.at("attention").get<std::vector<std::vector<double>>>();
    rec.persona_positions = row.at("persona_positions").get<std::vector<std::size_t>>();
    if (row.contains("overlap_pairs")) {
      rec.overlap_pairs = row.at("overlap_pairs").get<std::vector<std::pair<std::size_t, std::size_t>>>();
    } else if (row.contains("input_tokens") && row.contains("response_tokens")) {
      rec.overlap_pairs = extract_overlap_pairs(row.at("input_tokens").get<corpus::Tokens>(), rec.persona_positions,
                                                row.at("response_tokens").get<corpus::Tokens>(), tagger);
    }
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ValidationError(std::string("bad attention record: ") + e.what());
  }
  return rec;
}

}  // namespace d3::metrics
