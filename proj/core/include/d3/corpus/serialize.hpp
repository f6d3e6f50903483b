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

#include <string>
#include <vector>

#include "d3/corpus/samples.hpp"

namespace d3::corpus {

struct SymbolTable {
  std::string begin = "<bos>";
  std::string end = "<eos>";
  std::string talker1 = "<talker1>";
  std::string talker2 = "<talker2>";
};

enum class Segment { persona, talker1, talker2 };

const char* to_string(Segment s);

// Flat model input. Layout:
//   <bos> persona tokens... (<talkerX> utterance tokens...)*
// The last history utterance belongs to talker1 (the partner) and talkers
// alternate backwards from there. The target is <talker2> response <eos>.
struct SerializedInput {
  Tokens tokens;
  std::vector<Segment> segment_labels;
  Tokens target_tokens;
};

SerializedInput serialize_input(const DialogueSample& sample, const SymbolTable& symbols = {});
SerializedInput serialize_input(const DistilledSample& sample, const SymbolTable& symbols = {});

}  // namespace d3::corpus
