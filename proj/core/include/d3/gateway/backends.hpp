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

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "d3/corpus/sentence.hpp"
#include "d3/gateway/pos.hpp"

namespace d3::gateway {

using corpus::Sentence;
using corpus::Tokens;

enum class EntailmentLabel { entail, neutral, contradict };

const char* to_string(EntailmentLabel label);
EntailmentLabel parse_entailment_label(std::string_view name);

struct EntailmentJudgment {
  double entail_prob = 0.0;
  EntailmentLabel label = EntailmentLabel::neutral;
};

// Scores whether `premise` entails `hypothesis`. The decision threshold is
// internal to each scorer, so a weaker (few-shot) model is just another
// backend. Direction matters; no implementation is assumed symmetric.
class EntailmentScorer {
 public:
  virtual ~EntailmentScorer() = default;
  virtual std::string name() const = 0;
  virtual EntailmentJudgment entail(const Sentence& premise, const Sentence& hypothesis) const = 0;
};

class FluencyScorer {
 public:
  explicit FluencyScorer(double normalizer = 50.0);
  virtual ~FluencyScorer() = default;
  virtual std::string name() const = 0;
  virtual double perplexity(const Tokens& text) const = 0;

  // min(perplexity, C) / C; lower is more fluent. Throws on empty text.
  double normalized_ppl(const Tokens& text) const;
  double normalizer() const noexcept { return normalizer_; }

 private:
  double normalizer_;
};

// Sentence-pair similarity in [0, 1].
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual std::string name() const = 0;
  virtual double similarity(const Tokens& a, const Tokens& b) const = 0;
};

// Tokens a generator must never emit.
bool is_special_symbol(std::string_view token);
inline constexpr std::string_view kMaskSymbol = "[MASK]";

// Masked-token infilling. infill() enforces the contract (outputs only differ
// at the masked positions, never contain special symbols, are unique);
// implementations only propose raw candidates, filling masked positions
// left to right so each fill sees the earlier ones.
class Infiller {
 public:
  virtual ~Infiller() = default;
  virtual std::string name() const = 0;

  std::vector<Tokens> infill(const Tokens& tokens, std::vector<std::size_t> mask_positions, std::size_t n,
                             std::uint64_t seed) const;

  virtual std::vector<Tokens> propose(const Tokens& tokens, const std::vector<std::size_t>& mask_positions,
                                      std::size_t n, std::uint64_t seed) const = 0;
};

// Prefix continuation. continue_prefix() returns prefix ++ continuation with
// 1 <= |continuation| <= max_new, deduplicated; propose() returns the raw
// continuations (new tokens only).
class Continuer {
 public:
  virtual ~Continuer() = default;
  virtual std::string name() const = 0;

  std::vector<Tokens> continue_prefix(const Tokens& prefix, std::size_t max_new, std::size_t n,
                                      std::uint64_t seed) const;

  virtual std::vector<Tokens> propose(const Tokens& prefix, std::size_t max_new, std::size_t n,
                                      std::uint64_t seed) const = 0;
};

// A forward/backward translation pair producing beam hypotheses.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string name() const = 0;
  virtual std::vector<Tokens> forward(const Tokens& text, std::size_t beam, std::uint64_t seed) const = 0;
  virtual std::vector<Tokens> backward(const Tokens& text, std::size_t beam, std::uint64_t seed) const = 0;

  // Every forward hypothesis crossed with every backward hypothesis of it:
  // at most beam * beam variants, deduplicated, the original excluded.
  std::vector<Sentence> back_translate(const Sentence& text, std::size_t beam, std::uint64_t seed) const;
};

// (persona, history) -> response tokens. An empty result means no response
// could be generated.
class Responder {
 public:
  virtual ~Responder() = default;
  virtual std::string name() const = 0;
  virtual Tokens respond(const Sentence& persona, const Sentence& history, std::uint64_t seed) const = 0;
};

// Every learned model the pipeline consults. Members are immutable and safe
// for concurrent read-only use.
struct BackendSuite {
  std::shared_ptr<const EntailmentScorer> persona_nli;    // premise = response, hypothesis = persona
  std::shared_ptr<const EntailmentScorer> coherence_nli;  // premise = history, hypothesis = response
  std::shared_ptr<const FluencyScorer> fluency;
  std::shared_ptr<const SimilarityScorer> similarity;
  std::shared_ptr<const Infiller> infiller;
  std::shared_ptr<const Continuer> continuer;
  std::shared_ptr<const Translator> translator;
  std::shared_ptr<const Responder> responder;
  std::shared_ptr<const PosTagger> pos_tagger;

  // Throws ValidationError naming the first missing member.
  void require_complete() const;
};

}  // namespace d3::gateway
