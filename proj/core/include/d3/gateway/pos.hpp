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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d3/corpus/tokenizer.hpp"

namespace d3::gateway {

// Universal-dependencies coarse tags.
enum class PosTag { VERB, NOUN, PROPN, NUM, ADV, ADP, ADJ, PRON, DET, AUX, CCONJ, SCONJ, PART, INTJ, PUNCT, X };

const char* to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view name);

// The informative tags eligible for masking, response alignment and the
// overlap oracles: VERB, NOUN, PROPN, NUM, ADV, ADP, ADJ.
bool is_target_tag(PosTag tag);

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::string name() const = 0;
  virtual PosTag tag(std::string_view token) const = 0;
  virtual std::vector<PosTag> tag_all(const corpus::Tokens& tokens) const;

  bool is_content(std::string_view token) const { return is_target_tag(tag(token)); }
};

// Closed-class word lists map to function tags; open-class words are tagged
// by suffix heuristics and a short lexicon, defaulting to NOUN.
class RulePosTagger final : public PosTagger {
 public:
  std::string name() const override { return "rules"; }
  PosTag tag(std::string_view token) const override;
};

}  // namespace d3::gateway
