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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "d3/corpus/samples.hpp"

namespace d3::corpus {

using Json = nlohmann::ordered_json;

// Sample rows share the schema
//   {dialogue_id, turn_index, persona: [str], history: [str], response: str}
// and derived rows add a source_id object.
Json to_json(const DialogueSample& sample);
Json to_json(const DistilledSample& sample);
Json to_json(const SourceId& id);

// Accepts any sample row; fields beyond the shared schema are ignored.
DialogueSample dialogue_sample_from_json(const Json& row);
DistilledSample distilled_sample_from_json(const Json& row);
SourceId source_id_from_json(const Json& j);

// Reads one JSON object per non-empty line. Throws ParseError with the line.
std::vector<Json> read_jsonl(std::istream& in);
std::vector<Json> read_jsonl_file(const std::filesystem::path& path);

// One compact JSON object per line, '\n'-terminated.
void write_jsonl(std::ostream& out, const std::vector<Json>& rows);
void write_jsonl_file(const std::filesystem::path& path, const std::vector<Json>& rows);
std::string to_jsonl(const std::vector<Json>& rows);

std::vector<DialogueSample> read_dialogue_samples(const std::filesystem::path& path);
std::vector<DistilledSample> read_distilled_samples(const std::filesystem::path& path);

// Loads a corpus from either ConvAI2 text (".txt") or sample JSONL.
std::vector<DialogueSample> load_corpus(const std::filesystem::path& path,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace d3::corpus
