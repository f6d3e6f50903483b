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

#include <iosfwd>
#include <string>
#include <vector>

#include "d3/corpus/samples.hpp"

namespace d3::corpus {

// One partner/self exchange of a ConvAI2 dialogue. `reward` and
// `candidates` are carried through for round-tripping; the pipeline never
// reads them.
struct TurnPair {
  std::string partner;
  std::string self;
  std::string reward;
  std::vector<std::string> candidates;

  friend bool operator==(const TurnPair&, const TurnPair&) = default;
};

struct DialogueRecord {
  std::string dialogue_id;
  std::vector<std::string> persona;
  std::vector<std::string> partner_persona;
  std::vector<TurnPair> turns;

  friend bool operator==(const DialogueRecord&, const DialogueRecord&) = default;
};

// Parses the line-numbered ConvAI2 / PersonaChat text format:
//
//   1 your persona: i like cats.
//   2 hi there<TAB>hello how are you[<TAB>reward<TAB>cand1|cand2|...]
//
// A line number that does not increase starts a new dialogue. Dialogue ids
// are `id_prefix` followed by the zero-based dialogue index. Throws
// ParseError with the 1-based physical line index.
std::vector<DialogueRecord> parse_convai2(std::istream& in, const std::string& id_prefix = "");

// Writes records back in the same format; parse_convai2 of the output
// reproduces the records (dialogue ids aside).
void emit_convai2(const std::vector<DialogueRecord>& records, std::ostream& out);

// One sample per turn pair: history holds every utterance before the
// self-utterance, the self-utterance is the response. Dialogues outside the
// usual PersonaChat shape (4..6 persona lines, at most 15 history utterances)
// are reported through `warnings` but still unrolled.
std::vector<DialogueSample> unroll_dialogues(const std::vector<DialogueRecord>& dialogues,
                                             std::vector<std::string>* warnings = nullptr);

}  // namespace d3::corpus
