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

#include "d3/corpus/tokenizer.hpp"

#include <cctype>

namespace d3::corpus {

namespace {

bool punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

void split_chunk(std::string_view chunk, Tokens& out) {
  std::size_t lo = 0, hi = chunk.size();
  while (lo < hi && punct(chunk[lo])) out.emplace_back(1, chunk[lo++]);
  std::size_t tail = hi;
  while (tail > lo && punct(chunk[tail - 1])) --tail;
  if (tail > lo) out.emplace_back(chunk.substr(lo, tail - lo));
  for (std::size_t i = tail; i < hi; ++i) out.emplace_back(1, chunk[i]);
}

}  // namespace

Tokens tokenize(std::string_view text) {
  std::string lowered(text);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  Tokens out;
  std::size_t i = 0;
  while (i < lowered.size()) {
    while (i < lowered.size() && space(lowered[i])) ++i;
    std::size_t start = i;
    while (i < lowered.size() && !space(lowered[i])) ++i;
    if (i > start) split_chunk(std::string_view(lowered).substr(start, i - start), out);
  }
  return out;
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token)
    if (!punct(c)) return false;
  return true;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    // Punctuation glues to the left; a word always opens a new chunk.
    if (i > 0 && !is_punctuation(tokens[i])) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string join(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace d3::corpus
