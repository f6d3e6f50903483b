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

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "d3/corpus/sentence.hpp"

namespace d3::metrics {

using corpus::Tokens;

// An n-gram is keyed by its tokens joined with U+001F, which the tokenizer
// never produces.
std::string ngram_key(const Tokens& tokens, std::size_t begin, std::size_t n);

std::map<std::string, std::size_t> ngram_counts(const Tokens& tokens, std::size_t n);
std::set<std::string> ngram_types(const std::vector<Tokens>& corpus, std::size_t n);

std::vector<Tokens> tokens_of(const std::vector<corpus::Sentence>& sentences);

}  // namespace d3::metrics
