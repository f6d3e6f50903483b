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

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "d3/corpus/samples.hpp"
#include "d3/corpus/stats.hpp"

namespace d3::diversify {

using corpus::PersonaSentence;
using corpus::Sentence;
using corpus::SourceId;
using corpus::Utterance;

enum class EditKind { token_level, phrase_level };
enum class HistoryKind { original, back_translated };
enum class ResponseKind { token_edited, generated };

const char* to_string(EditKind k);
const char* to_string(HistoryKind k);
const char* to_string(ResponseKind k);

struct EditedPersona {
  PersonaSentence sentence;
  EditKind edit_kind = EditKind::token_level;
  PersonaSentence source;
  double f_score = 0.0;
};

struct DiversifiedSample {
  EditedPersona persona;
  Utterance history;
  HistoryKind history_kind = HistoryKind::original;
  Utterance response;
  ResponseKind response_kind = ResponseKind::generated;
  double s_score = 0.0;
  SourceId source_id;

  corpus::DialogueSample as_dialogue_sample() const {
    return corpus::DialogueSample{{persona.sentence}, {history}, response, source_id.dialogue_id, source_id.turn_index};
  }
};

nlohmann::ordered_json to_json(const DiversifiedSample& s);
DiversifiedSample diversified_sample_from_json(const nlohmann::ordered_json& row);

corpus::DatasetStats compute_stats(const std::vector<DiversifiedSample>& samples);

// Counts per (persona edit T/P) x (history O/B) x (response E/G) cell.
struct CompositionReport {
  // Indexed [edit][history][response] in enum order.
  std::array<std::array<std::array<std::size_t, 2>, 2>, 2> counts{};
  std::size_t total = 0;

  void add(const DiversifiedSample& s);
  double proportion(EditKind e, HistoryKind h, ResponseKind r) const;
  // Share of samples whose response came from the generator.
  double generated_share() const;
  nlohmann::ordered_json to_json() const;
};

CompositionReport compose(const std::vector<DiversifiedSample>& samples);

}  // namespace d3::diversify
