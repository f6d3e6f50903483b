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

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "d3/corpus/sentence.hpp"

namespace d3::corpus {

// One training sample of the original corpus: persona P, history H, gold
// response R.
struct DialogueSample {
  std::vector<PersonaSentence> persona;
  std::vector<Utterance> history;
  Utterance response;
  std::string dialogue_id;
  std::size_t turn_index = 0;

  friend bool operator==(const DialogueSample&, const DialogueSample&) = default;
};

// Identifies the persona sentence of an original sample a derived sample
// came from.
struct SourceId {
  std::string dialogue_id;
  std::size_t turn_index = 0;
  std::size_t persona_index = 0;

  std::string key() const {
    return dialogue_id + "/" + std::to_string(turn_index) + "/" + std::to_string(persona_index);
  }

  friend auto operator<=>(const SourceId&, const SourceId&) = default;
  friend bool operator==(const SourceId&, const SourceId&) = default;
};

// The easy-curriculum unit: one entailed persona sentence, the last history
// utterance, and the unchanged response.
struct DistilledSample {
  PersonaSentence persona;
  Utterance history;
  Utterance response;
  SourceId source_id;

  // View as an original-format sample with L = M = 1.
  DialogueSample as_dialogue_sample() const {
    return DialogueSample{{persona}, {history}, response, source_id.dialogue_id, source_id.turn_index};
  }

  friend bool operator==(const DistilledSample&, const DistilledSample&) = default;
};

}  // namespace d3::corpus
