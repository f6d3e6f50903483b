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

#include "d3/pipeline/toml.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "d3/common/error.hpp"

namespace d3::pipeline {

namespace {

using Json = nlohmann::ordered_json;

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  void expect_end() {
    if (!at_end_or_comment()) fail("unexpected text '" + std::string(s_.substr(pos_)) + "'");
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::string key() {
    skip_ws();
    if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) return string_value();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string string_value() {
    const char quote = s_[pos_++];
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated string");
      char c = s_[pos_++];
      if (c == quote) return out;
      if (quote == '"' && c == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        char e = s_[pos_++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
  }

  Json value() {
    char c = peek();
    if (c == '"' || c == '\'') return string_value();
    if (c == '[') {
      ++pos_;
      Json arr = Json::array();
      if (consume(']')) return arr;
      while (true) {
        arr.push_back(value());
        if (consume(']')) return arr;
        if (!consume(',')) fail("expected ',' or ']' in array");
        if (consume(']')) return arr;
      }
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' && s_[pos_] != ' ' &&
           s_[pos_] != '\t') {
      ++pos_;
    }
    std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty()) fail("expected a value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    return number(tok);
  }

 private:
  Json number(std::string tok) {
    std::string clean;
    for (char c : tok) {
      if (c != '_') clean += c;
    }
    if (!clean.empty() && clean[0] == '+') clean.erase(0, 1);
    const char* b = clean.data();
    const char* e = b + clean.size();
    if (clean.find_first_of(".eE") == std::string::npos) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec == std::errc() && p == e) return v;
    } else {
      double v = 0.0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec == std::errc() && p == e && std::isfinite(v)) return v;
    }
    fail("invalid value '" + tok + "'");
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string format_key(const std::string& k) {
  bool bare = !k.empty();
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) bare = false;
  }
  return bare ? k : Json(k).dump();
}

std::string format_value(const Json& v) {
  if (v.is_number_float()) {
    std::array<char, 64> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v.get<double>());
    std::string s(buf.data(), p);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
  }
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += format_value(v[i]);
    }
    return s + "]";
  }
  if (v.is_object() || v.is_null()) throw Error("cannot write nested value as TOML");
  return v.dump();
}

void dump_table(std::string& out, const Json& table, const std::string& prefix) {
  std::vector<std::pair<std::string, const Json*>> subtables;
  for (const auto& [k, v] : table.items()) {
    if (v.is_object()) {
      subtables.emplace_back(k, &v);
    } else {
      out += format_key(k) + " = " + format_value(v) + "\n";
    }
  }
  for (const auto& [k, v] : subtables) {
    std::string name = prefix.empty() ? format_key(k) : prefix + "." + format_key(k);
    if (!out.empty()) out += "\n";
    out += "[" + name + "]\n";
    dump_table(out, *v, name);
  }
}

}  // namespace

Json parse_toml(std::string_view text) {
  Json root = Json::object();
  Json* table = &root;
  std::vector<std::string> defined_tables;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    LineParser p(line, line_no);
    if (p.at_end_or_comment()) {
      if (end == text.size()) break;
      continue;
    }
    if (p.consume('[')) {
      if (p.peek() == '[') p.fail("arrays of tables are not supported");
      std::vector<std::string> path{p.key()};
      while (p.consume('.')) path.push_back(p.key());
      if (!p.consume(']')) p.fail("expected ']' after table name");
      p.expect_end();
      std::string full;
      table = &root;
      for (const auto& part : path) {
        full += (full.empty() ? "" : ".") + part;
        Json& next = (*table)[part];
        if (next.is_null()) next = Json::object();
        if (!next.is_object()) p.fail("'" + full + "' is already a value");
        table = &next;
      }
      for (const auto& t : defined_tables) {
        if (t == full) p.fail("table [" + full + "] defined twice");
      }
      defined_tables.push_back(full);
    } else {
      std::string k = p.key();
      if (!p.consume('=')) p.fail("expected '=' after key '" + k + "'");
      Json v = p.value();
      p.expect_end();
      if (table->contains(k)) p.fail("duplicate key '" + k + "'");
      (*table)[k] = std::move(v);
    }
    if (end == text.size()) break;
  }
  return root;
}

std::string dump_toml(const Json& root) {
  if (!root.is_object()) throw Error("TOML root must be an object");
  std::string out;
  dump_table(out, root, "");
  return out;
}

}  // namespace d3::pipeline
