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

#include "d3/corpus/serialize.hpp"

#include "d3/common/error.hpp"

namespace d3::corpus {

const char* to_string(Segment s) {
  switch (s) {
    case Segment::persona: return "persona";
    case Segment::talker1: return "talker1";
    case Segment::talker2: return "talker2";
  }
  return "?";
}

SerializedInput serialize_input(const DialogueSample& sample, const SymbolTable& symbols) {
  if (sample.persona.empty() && sample.history.empty())
    throw ValidationError("cannot serialize a sample with neither persona nor history");

  SerializedInput out;
  auto push = [&out](const std::string& tok, Segment seg) {
    out.tokens.push_back(tok);
    out.segment_labels.push_back(seg);
  };
  push(symbols.begin, Segment::persona);
  for (const auto& p : sample.persona)
    for (const auto& tok : p.tokens()) push(tok, Segment::persona);

  const std::size_t m = sample.history.size();
  for (std::size_t i = 0; i < m; ++i) {
    // Distance from the end decides the talker: last is the partner.
    const bool partner = (m - 1 - i) % 2 == 0;
    const Segment seg = partner ? Segment::talker1 : Segment::talker2;
    push(partner ? symbols.talker1 : symbols.talker2, seg);
    for (const auto& tok : sample.history[i].tokens()) push(tok, seg);
  }

  out.target_tokens.push_back(symbols.talker2);
  for (const auto& tok : sample.response.tokens()) out.target_tokens.push_back(tok);
  out.target_tokens.push_back(symbols.end);
  return out;
}

SerializedInput serialize_input(const DistilledSample& sample, const SymbolTable& symbols) {
  return serialize_input(sample.as_dialogue_sample(), symbols);
}

}  // namespace d3::corpus
