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

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "d3/gateway/backends.hpp"

namespace d3::gateway {

// entail_prob = |content types of the hypothesis found in the premise| /
// |content types of the hypothesis|, content meaning target POS tags. A
// hypothesis without content tokens falls back to exact token equality.
// Never predicts contradiction.
class OverlapEntailment final : public EntailmentScorer {
 public:
  OverlapEntailment(std::shared_ptr<const PosTagger> tagger, double threshold = 0.5)
      : tagger_(std::move(tagger)), threshold_(threshold) {}

  std::string name() const override { return "overlap"; }
  EntailmentJudgment entail(const Sentence& premise, const Sentence& hypothesis) const override;
  double threshold() const noexcept { return threshold_; }

 private:
  std::shared_ptr<const PosTagger> tagger_;
  double threshold_;
};

// Character n-gram language model with add-k smoothing. Perplexity is per
// character of the space-joined tokens, including the end marker.
class CharNgramFluency final : public FluencyScorer {
 public:
  CharNgramFluency(const std::vector<Tokens>& training, std::size_t order = 3, double add_k = 0.1,
                   double normalizer = 50.0);

  std::string name() const override { return "char-ngram"; }
  double perplexity(const Tokens& text) const override;

 private:
  std::size_t order_;
  double add_k_;
  double vocab_size_;
  std::unordered_map<std::string, std::unordered_map<char, double>> counts_;
  std::unordered_map<std::string, double> context_totals_;
};

class JaccardSimilarity final : public SimilarityScorer {
 public:
  std::string name() const override { return "jaccard"; }
  double similarity(const Tokens& a, const Tokens& b) const override;
};

// Substitutes each masked token with an alternative from a lookup table.
// Candidate draws enumerate the table combinatorially; the starting offset
// at each position depends on the seed and the (already filled) left
// neighbour.
class TableInfiller final : public Infiller {
 public:
  using Table = std::map<std::string, std::vector<std::string>>;
  explicit TableInfiller(Table table) : table_(std::move(table)) {}

  // Alternatives for w are tokens of the same tag seen after the same left
  // neighbours as w, ranked by co-occurrence count.
  static TableInfiller from_corpus(const std::vector<Tokens>& sentences, const PosTagger& tagger,
                                   std::size_t max_alternatives = 8);

  std::string name() const override { return "cooccurrence"; }
  std::vector<Tokens> propose(const Tokens& tokens, const std::vector<std::size_t>& mask_positions,
                              std::size_t n, std::uint64_t seed) const override;
  const Table& table() const noexcept { return table_; }

 private:
  Table table_;
};

// Bigram sampler over a fitted corpus, falling back to unigram counts for
// unseen contexts.
class NgramContinuer final : public Continuer {
 public:
  using Counts = std::map<std::string, double>;
  NgramContinuer(std::map<std::string, Counts> bigrams, Counts unigrams)
      : bigrams_(std::move(bigrams)), unigrams_(std::move(unigrams)) {}

  static NgramContinuer from_corpus(const std::vector<Tokens>& sentences);

  std::string name() const override { return "ngram"; }
  std::vector<Tokens> propose(const Tokens& prefix, std::size_t max_new, std::size_t n,
                              std::uint64_t seed) const override;

 private:
  std::map<std::string, Counts> bigrams_;
  Counts unigrams_;
};

class IdentityTranslator final : public Translator {
 public:
  std::string name() const override { return "identity"; }
  std::vector<Tokens> forward(const Tokens& text, std::size_t, std::uint64_t) const override { return {text}; }
  std::vector<Tokens> backward(const Tokens& text, std::size_t, std::uint64_t) const override { return {text}; }
};

// Hypothesis 0 is the input; hypothesis j >= 1 drops one token at a seeded
// position. Round trips therefore yield subsequences of the input.
class WordDropoutTranslator final : public Translator {
 public:
  std::string name() const override { return "word-dropout"; }
  std::vector<Tokens> forward(const Tokens& text, std::size_t beam, std::uint64_t seed) const override;
  std::vector<Tokens> backward(const Tokens& text, std::size_t beam, std::uint64_t seed) const override;
};

// Like WordDropoutTranslator but swaps an adjacent token pair.
class WordSwapTranslator final : public Translator {
 public:
  std::string name() const override { return "word-swap"; }
  std::vector<Tokens> forward(const Tokens& text, std::size_t beam, std::uint64_t seed) const override;
  std::vector<Tokens> backward(const Tokens& text, std::size_t beam, std::uint64_t seed) const override;
};

// Echoes the persona statement followed by "too": "i like dogs" -> "i like
// dogs too". Trailing punctuation is dropped.
class TemplateResponder final : public Responder {
 public:
  std::string name() const override { return "template"; }
  Tokens respond(const Sentence& persona, const Sentence& history, std::uint64_t seed) const override;
};

}  // namespace d3::gateway
