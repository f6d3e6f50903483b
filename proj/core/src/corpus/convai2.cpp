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

#include "d3/corpus/convai2.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <string_view>

#include "d3/common/error.hpp"

namespace d3::corpus {

namespace {

constexpr std::string_view kYourPersona = "your persona:";
constexpr std::string_view kPartnerPersona = "partner's persona:";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

}  // namespace

std::vector<DialogueRecord> parse_convai2(std::istream& in, const std::string& id_prefix) {
  std::vector<DialogueRecord> records;
  std::string raw;
  std::size_t line_index = 0;
  long previous_number = 0;
  while (std::getline(in, raw)) {
    ++line_index;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    std::size_t digits = 0;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
    if (digits == 0 || digits >= line.size() || line[digits] != ' ')
      throw ParseError("expected a line number followed by a space", line_index);
    const long number = std::stol(std::string(line.substr(0, digits)));
    std::string_view body = line.substr(digits + 1);

    if (records.empty() || number <= previous_number) {
      DialogueRecord rec;
      rec.dialogue_id = id_prefix + std::to_string(records.size());
      records.push_back(std::move(rec));
    }
    previous_number = number;
    DialogueRecord& current = records.back();

    if (body.substr(0, kYourPersona.size()) == kYourPersona) {
      current.persona.emplace_back(trim(body.substr(kYourPersona.size())));
      continue;
    }
    if (body.substr(0, kPartnerPersona.size()) == kPartnerPersona) {
      current.partner_persona.emplace_back(trim(body.substr(kPartnerPersona.size())));
      continue;
    }

    auto fields = split(body, '\t');
    if (fields.size() < 2) throw ParseError("utterance line has no tab-separated response", line_index);
    TurnPair turn;
    turn.partner = fields[0];
    turn.self = fields[1];
    if (fields.size() > 2) turn.reward = fields[2];
    if (fields.size() > 3 && !fields[3].empty()) turn.candidates = split(fields[3], '|');
    current.turns.push_back(std::move(turn));
  }
  return records;
}

void emit_convai2(const std::vector<DialogueRecord>& records, std::ostream& out) {
  for (const auto& rec : records) {
    int n = 1;
    for (const auto& p : rec.persona) out << n++ << ' ' << kYourPersona << ' ' << p << '\n';
    for (const auto& p : rec.partner_persona) out << n++ << ' ' << kPartnerPersona << ' ' << p << '\n';
    for (const auto& t : rec.turns) {
      out << n++ << ' ' << t.partner << '\t' << t.self;
      if (!t.reward.empty() || !t.candidates.empty()) {
        out << '\t' << t.reward << '\t';
        for (std::size_t i = 0; i < t.candidates.size(); ++i) out << (i ? "|" : "") << t.candidates[i];
      }
      out << '\n';
    }
  }
}

std::vector<DialogueSample> unroll_dialogues(const std::vector<DialogueRecord>& dialogues,
                                             std::vector<std::string>* warnings) {
  std::vector<DialogueSample> samples;
  auto utterance = [](const std::string& text, const DialogueRecord& rec) {
    Utterance u(text);
    if (u.empty()) throw ValidationError("dialogue " + rec.dialogue_id + " contains an empty utterance");
    return u;
  };
  for (const auto& rec : dialogues) {
    if (rec.turns.empty()) throw ValidationError("dialogue " + rec.dialogue_id + " has no turns");
    if (rec.persona.empty()) throw ValidationError("dialogue " + rec.dialogue_id + " has no persona");
    if (warnings && (rec.persona.size() < 4 || rec.persona.size() > 6))
      warnings->push_back("dialogue " + rec.dialogue_id + ": " + std::to_string(rec.persona.size()) +
                          " persona sentences (expected 4..6)");

    std::vector<PersonaSentence> persona;
    for (const auto& p : rec.persona) persona.push_back(utterance(p, rec));
    std::vector<Utterance> history;
    for (std::size_t t = 0; t < rec.turns.size(); ++t) {
      history.push_back(utterance(rec.turns[t].partner, rec));
      Utterance response = utterance(rec.turns[t].self, rec);
      if (warnings && history.size() > 15)
        warnings->push_back("dialogue " + rec.dialogue_id + " turn " + std::to_string(t) + ": " +
                            std::to_string(history.size()) + " history utterances (expected <= 15)");
      samples.push_back(DialogueSample{persona, history, response, rec.dialogue_id, t});
      history.push_back(std::move(response));
    }
  }
  return samples;
}

}  // namespace d3::corpus
