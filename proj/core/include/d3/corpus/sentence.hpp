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
#include <utility>

#include "d3/corpus/tokenizer.hpp"

namespace d3::corpus {

// A single utterance or persona sentence: raw text plus its canonical tokens.
// Immutable once built; the tokens are always tokenize(text()).
class Sentence {
 public:
  Sentence() = default;
  explicit Sentence(std::string text) : text_(std::move(text)), tokens_(tokenize(text_)) {}

  // Builds a sentence whose text is the detokenized form of `tokens`.
  static Sentence from_tokens(const Tokens& tokens) { return Sentence(detokenize(tokens)); }

  const std::string& text() const noexcept { return text_; }
  const Tokens& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  // Space-joined tokens; two sentences with equal keys are the same sentence
  // for uniqueness counting.
  std::string key() const { return join(tokens_); }

  friend bool operator==(const Sentence& a, const Sentence& b) { return a.text_ == b.text_; }

 private:
  std::string text_;
  Tokens tokens_;
};

using Utterance = Sentence;
using PersonaSentence = Sentence;

}  // namespace d3::corpus
