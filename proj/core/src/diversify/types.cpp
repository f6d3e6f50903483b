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

#include "d3/diversify/types.hpp"

#include "d3/common/error.hpp"
#include "d3/corpus/jsonl.hpp"

namespace d3::diversify {

const char* to_string(EditKind k) { return k == EditKind::token_level ? "token_level" : "phrase_level"; }
const char* to_string(HistoryKind k) { return k == HistoryKind::original ? "original" : "back_translated"; }
const char* to_string(ResponseKind k) { return k == ResponseKind::token_edited ? "token_edited" : "generated"; }

namespace {

template <typename E>
E parse_kind(const nlohmann::ordered_json& j, const char* key, E a, E b) {
  const auto name = j.at(key).get<std::string>();
  if (name == to_string(a)) return a;
  if (name == to_string(b)) return b;
  throw ValidationError("unknown value '" + name + "'", key);
}

}  // namespace

nlohmann::ordered_json to_json(const DiversifiedSample& s) {
  nlohmann::ordered_json row;
  row["dialogue_id"] = s.source_id.dialogue_id;
  row["turn_index"] = s.source_id.turn_index;
  row["persona"] = nlohmann::ordered_json::array({s.persona.sentence.text()});
  row["history"] = nlohmann::ordered_json::array({s.history.text()});
  row["response"] = s.response.text();
  row["source_id"] = corpus::to_json(s.source_id);
  row["provenance"] = {{"persona_edit", to_string(s.persona.edit_kind)},
                       {"history", to_string(s.history_kind)},
                       {"response", to_string(s.response_kind)}};
  row["source_persona"] = s.persona.source.text();
  row["f_score"] = s.persona.f_score;
  row["s_score"] = s.s_score;
  return row;
}

DiversifiedSample diversified_sample_from_json(const nlohmann::ordered_json& row) {
  const auto base = corpus::distilled_sample_from_json(row);
  DiversifiedSample s;
  try {
    const auto& prov = row.at("provenance");
    s.persona = EditedPersona{base.persona,
                              parse_kind(prov, "persona_edit", EditKind::token_level, EditKind::phrase_level),
                              PersonaSentence(row.at("source_persona").get<std::string>()),
                              row.at("f_score").get<double>()};
    s.history = base.history;
    s.history_kind = parse_kind(prov, "history", HistoryKind::original, HistoryKind::back_translated);
    s.response = base.response;
    s.response_kind = parse_kind(prov, "response", ResponseKind::token_edited, ResponseKind::generated);
    s.s_score = row.at("s_score").get<double>();
    s.source_id = base.source_id;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ValidationError(std::string("bad diversified row: ") + e.what());
  }
  return s;
}

corpus::DatasetStats compute_stats(const std::vector<DiversifiedSample>& samples) {
  corpus::StatsAccumulator acc;
  for (const auto& s : samples) {
    const Utterance others[] = {s.history, s.response};
    acc.add_sample(std::span(&s.persona.sentence, 1), others);
  }
  return acc.finish();
}

void CompositionReport::add(const DiversifiedSample& s) {
  ++counts[static_cast<int>(s.persona.edit_kind)][static_cast<int>(s.history_kind)][static_cast<int>(s.response_kind)];
  ++total;
}

double CompositionReport::proportion(EditKind e, HistoryKind h, ResponseKind r) const {
  if (!total) return 0.0;
  return static_cast<double>(counts[static_cast<int>(e)][static_cast<int>(h)][static_cast<int>(r)]) /
         static_cast<double>(total);
}

double CompositionReport::generated_share() const {
  if (!total) return 0.0;
  std::size_t g = 0;
  for (int e = 0; e < 2; ++e)
    for (int h = 0; h < 2; ++h) g += counts[e][h][static_cast<int>(ResponseKind::generated)];
  return static_cast<double>(g) / static_cast<double>(total);
}

nlohmann::ordered_json CompositionReport::to_json() const {
  static constexpr char kEdit[] = {'T', 'P'}, kHist[] = {'O', 'B'}, kResp[] = {'E', 'G'};
  nlohmann::ordered_json cells = nlohmann::ordered_json::object();
  for (int e = 0; e < 2; ++e)
    for (int h = 0; h < 2; ++h)
      for (int r = 0; r < 2; ++r) {
        const std::string key{kEdit[e], '/', kHist[h], '/', kResp[r]};
        cells[key] = {{"count", counts[e][h][r]},
                      {"proportion", proportion(static_cast<EditKind>(e), static_cast<HistoryKind>(h),
                                                static_cast<ResponseKind>(r))}};
      }
  return {{"total", total}, {"generated_share", generated_share()}, {"cells", cells}};
}

CompositionReport compose(const std::vector<DiversifiedSample>& samples) {
  CompositionReport report;
  for (const auto& s : samples) report.add(s);
  return report;
}

}  // namespace d3::diversify
