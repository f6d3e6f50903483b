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
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "d3/corpus/tokenizer.hpp"
#include "d3/gateway/pos.hpp"

namespace d3::metrics {

// Decoder attention for one sample: attention[i][j] is the weight of
// decoding step i on input position j. persona_positions holds the input
// positions of the entailed persona sentences; overlap_pairs holds
// (input position, response position) pairs whose tokens coincide.
struct AttentionRecord {
  std::vector<std::vector<double>> attention;
  std::vector<std::size_t> persona_positions;
  std::vector<std::pair<std::size_t, std::size_t>> overlap_pairs;

  // Throws ValidationError when rows are ragged or not stochastic (1e-6),
  // or when positions fall outside the matrix.
  void validate() const;
};

struct ConsistentAttention {
  std::optional<double> token_level;  // a_t; absent when there are no overlap pairs
  double sentence_level = 0.0;        // a_s
};

ConsistentAttention consistent_attention(const AttentionRecord& record);

// Every persona position whose token is informative (target POS tag) is
// paired with each response position holding the same token.
std::vector<std::pair<std::size_t, std::size_t>> extract_overlap_pairs(
    const corpus::Tokens& input, const std::vector<std::size_t>& persona_positions,
    const corpus::Tokens& response, const gateway::PosTagger& tagger);

// Row schema: {"attention": [[...]], "persona_positions": [...],
//              "overlap_pairs": [[s, l], ...]}
// or, instead of overlap_pairs, "input_tokens" and "response_tokens" from
// which the pairs are extracted with `tagger`.
AttentionRecord attention_record_from_json(const nlohmann::ordered_json& row, const gateway::PosTagger& tagger);

}  // namespace d3::metrics
