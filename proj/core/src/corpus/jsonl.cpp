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

#include "d3/corpus/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "d3/common/error.hpp"
#include "d3/corpus/convai2.hpp"

namespace d3::corpus {

namespace {

Json texts(const std::vector<Sentence>& sentences) {
  Json arr = Json::array();
  for (const auto& s : sentences) arr.push_back(s.text());
  return arr;
}

const Json& field(const Json& row, const char* name) {
  auto it = row.find(name);
  if (it == row.end()) throw ValidationError("missing field", name);
  return *it;
}

std::string string_field(const Json& row, const char* name) {
  const Json& v = field(row, name);
  if (!v.is_string()) throw ValidationError("expected a string", name);
  return v.get<std::string>();
}

std::size_t count_field(const Json& row, const char* name) {
  const Json& v = field(row, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ValidationError("expected a non-negative integer", name);
  return v.get<std::size_t>();
}

std::vector<Sentence> sentences_field(const Json& row, const char* name) {
  const Json& v = field(row, name);
  if (!v.is_array()) throw ValidationError("expected an array of strings", name);
  std::vector<Sentence> out;
  for (const auto& item : v) {
    if (!item.is_string()) throw ValidationError("expected an array of strings", name);
    out.emplace_back(item.get<std::string>());
    if (out.back().empty()) throw ValidationError("empty sentence", name);
  }
  return out;
}

}  // namespace

Json to_json(const SourceId& id) {
  return Json{{"dialogue_id", id.dialogue_id}, {"turn_index", id.turn_index}, {"persona_index", id.persona_index}};
}

Json to_json(const DialogueSample& s) {
  Json row;
  row["dialogue_id"] = s.dialogue_id;
  row["turn_index"] = s.turn_index;
  row["persona"] = texts(s.persona);
  row["history"] = texts(s.history);
  row["response"] = s.response.text();
  return row;
}

Json to_json(const DistilledSample& s) {
  Json row;
  row["dialogue_id"] = s.source_id.dialogue_id;
  row["turn_index"] = s.source_id.turn_index;
  row["persona"] = Json::array({s.persona.text()});
  row["history"] = Json::array({s.history.text()});
  row["response"] = s.response.text();
  row["source_id"] = to_json(s.source_id);
  return row;
}

SourceId source_id_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("expected an object", "source_id");
  return SourceId{string_field(j, "dialogue_id"), count_field(j, "turn_index"), count_field(j, "persona_index")};
}

DialogueSample dialogue_sample_from_json(const Json& row) {
  if (!row.is_object()) throw ValidationError("sample row must be a JSON object");
  DialogueSample s;
  s.dialogue_id = string_field(row, "dialogue_id");
  s.turn_index = count_field(row, "turn_index");
  s.persona = sentences_field(row, "persona");
  s.history = sentences_field(row, "history");
  s.response = Sentence(string_field(row, "response"));
  if (s.response.empty()) throw ValidationError("empty sentence", "response");
  return s;
}

DistilledSample distilled_sample_from_json(const Json& row) {
  DialogueSample s = dialogue_sample_from_json(row);
  if (s.persona.size() != 1) throw ValidationError("distilled rows hold exactly one persona sentence", "persona");
  if (s.history.size() != 1) throw ValidationError("distilled rows hold exactly one history utterance", "history");
  return DistilledSample{s.persona[0], s.history[0], s.response, source_id_from_json(field(row, "source_id"))};
}

std::vector<Json> read_jsonl(std::istream& in) {
  std::vector<Json> rows;
  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    ++index;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), index);
    }
  }
  return rows;
}

std::vector<Json> read_jsonl_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_jsonl(in);
}

void write_jsonl(std::ostream& out, const std::vector<Json>& rows) {
  for (const auto& r : rows) out << r.dump() << '\n';
}

std::string to_jsonl(const std::vector<Json>& rows) {
  std::ostringstream os;
  write_jsonl(os, rows);
  return os.str();
}

void write_jsonl_file(const std::filesystem::path& path, const std::vector<Json>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  write_jsonl(out, rows);
}

namespace {

template <typename T, typename Fn>
std::vector<T> decode_rows(const std::vector<Json>& rows, Fn decode) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      out.push_back(decode(rows[i]));
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<DialogueSample> read_dialogue_samples(const std::filesystem::path& path) {
  return decode_rows<DialogueSample>(read_jsonl_file(path), dialogue_sample_from_json);
}

std::vector<DistilledSample> read_distilled_samples(const std::filesystem::path& path) {
  return decode_rows<DistilledSample>(read_jsonl_file(path), distilled_sample_from_json);
}

std::vector<DialogueSample> load_corpus(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  if (path.extension() == ".txt") {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return unroll_dialogues(parse_convai2(in), warnings);
  }
  return read_dialogue_samples(path);
}

}  // namespace d3::corpus
