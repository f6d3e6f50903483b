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

#include "d3/metrics/ngram.hpp"

namespace d3::metrics {

std::string ngram_key(const Tokens& tokens, std::size_t begin, std::size_t n) {
  std::string key;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) key.push_back('\x1f');
    key += tokens[begin + i];
  }
  return key;
}

std::map<std::string, std::size_t> ngram_counts(const Tokens& tokens, std::size_t n) {
  std::map<std::string, std::size_t> counts;
  if (n == 0 || tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[ngram_key(tokens, i, n)];
  return counts;
}

std::set<std::string> ngram_types(const std::vector<Tokens>& corpus, std::size_t n) {
  std::set<std::string> types;
  for (const auto& s : corpus)
    for (auto& [g, c] : ngram_counts(s, n)) types.insert(g);
  return types;
}

std::vector<Tokens> tokens_of(const std::vector<corpus::Sentence>& sentences) {
  std::vector<Tokens> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(s.tokens());
  return out;
}

}  // namespace d3::metrics
