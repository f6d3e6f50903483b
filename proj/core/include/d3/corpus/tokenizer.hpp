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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace d3::corpus {

using Tokens = std::vector<std::string>;

// Canonical tokenization shared by every stage: ASCII-lowercase, split on
// whitespace, then peel leading and trailing punctuation characters off each
// chunk as one-character tokens. Inner punctuation ("don't", "e-mail") stays.
Tokens tokenize(std::string_view text);

// Inverse of tokenize() for canonical token streams: tokens are joined by a
// single space except that punctuation-only tokens attach to the preceding
// token. tokenize(detokenize(t)) == t whenever t came from tokenize().
std::string detokenize(std::span<const std::string> tokens);

// Tokens joined by single spaces; the normalized identity of a sentence.
std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

bool is_punctuation(std::string_view token);

}  // namespace d3::corpus
