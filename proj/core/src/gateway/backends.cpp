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

#include "d3/gateway/backends.hpp"

#include <algorithm>
#include <set>

#include "d3/common/error.hpp"
#include "d3/common/rng.hpp"

namespace d3::gateway {

const char* to_string(EntailmentLabel label) {
  switch (label) {
    case EntailmentLabel::entail: return "entail";
    case EntailmentLabel::neutral: return "neutral";
    case EntailmentLabel::contradict: return "contradict";
  }
  return "?";
}

EntailmentLabel parse_entailment_label(std::string_view name) {
  if (name == "entail") return EntailmentLabel::entail;
  if (name == "neutral") return EntailmentLabel::neutral;
  if (name == "contradict") return EntailmentLabel::contradict;
  throw BackendError("unknown entailment label '" + std::string(name) + "'");
}

FluencyScorer::FluencyScorer(double normalizer) : normalizer_(normalizer) {
  if (!(normalizer > 0.0)) throw ValidationError("perplexity normalizer must be positive", "ppl_normalizer");
}

double FluencyScorer::normalized_ppl(const Tokens& text) const {
  if (text.empty()) throw ValidationError("normalized_ppl of empty text");
  const double ppl = perplexity(text);
  return std::min(ppl, normalizer_) / normalizer_;
}

bool is_special_symbol(std::string_view token) {
  if (token == kMaskSymbol) return true;
  return token.size() > 2 && token.front() == '<' && token.back() == '>';
}

namespace {

bool has_special(const Tokens& tokens) {
  return std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) { return is_special_symbol(t); });
}

}  // namespace

std::vector<Tokens> Infiller::infill(const Tokens& tokens, std::vector<std::size_t> mask_positions, std::size_t n,
                                     std::uint64_t seed) const {
  if (n == 0) throw ValidationError("infill: n must be >= 1");
  std::sort(mask_positions.begin(), mask_positions.end());
  mask_positions.erase(std::unique(mask_positions.begin(), mask_positions.end()), mask_positions.end());
  if (!mask_positions.empty() && mask_positions.back() >= tokens.size())
    throw ValidationError("infill: mask position out of range");
  if (mask_positions.empty()) return {tokens};

  std::vector<bool> masked(tokens.size(), false);
  for (auto p : mask_positions) masked[p] = true;

  std::vector<Tokens> out;
  std::set<Tokens> seen;
  for (auto& cand : propose(tokens, mask_positions, n, seed)) {
    if (out.size() == n) break;
    if (cand.size() != tokens.size() || has_special(cand)) continue;
    bool only_masked = true;
    for (std::size_t i = 0; i < cand.size() && only_masked; ++i)
      if (!masked[i] && cand[i] != tokens[i]) only_masked = false;
    if (!only_masked) continue;
    if (std::any_of(cand.begin(), cand.end(), [](const std::string& t) { return t.empty(); })) continue;
    if (seen.insert(cand).second) out.push_back(std::move(cand));
  }
  return out;
}

std::vector<Tokens> Continuer::continue_prefix(const Tokens& prefix, std::size_t max_new, std::size_t n,
                                               std::uint64_t seed) const {
  if (prefix.empty()) throw ValidationError("continue_prefix: empty prefix");
  if (max_new == 0) throw ValidationError("continue_prefix: max_new must be >= 1");
  if (n == 0) throw ValidationError("continue_prefix: n must be >= 1");

  std::vector<Tokens> out;
  std::set<Tokens> seen;
  for (auto& cont : propose(prefix, max_new, n, seed)) {
    if (out.size() == n) break;
    if (cont.empty() || has_special(cont)) continue;
    if (cont.size() > max_new) cont.resize(max_new);
    Tokens full = prefix;
    full.insert(full.end(), cont.begin(), cont.end());
    if (seen.insert(full).second) out.push_back(std::move(full));
  }
  return out;
}

std::vector<Sentence> Translator::back_translate(const Sentence& text, std::size_t beam,
                                                 std::uint64_t seed) const {
  if (beam == 0) throw ValidationError("back_translate: beam must be >= 1");
  std::vector<Sentence> out;
  std::set<Tokens> seen{text.tokens()};
  auto fwd = forward(text.tokens(), beam, derive_seed(seed, "forward"));
  if (fwd.size() > beam) fwd.resize(beam);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    auto bwd = backward(fwd[i], beam, derive_seed(seed, i));
    if (bwd.size() > beam) bwd.resize(beam);
    for (auto& hyp : bwd) {
      if (hyp.empty() || has_special(hyp)) continue;
      Sentence variant = Sentence::from_tokens(hyp);
      if (!variant.empty() && seen.insert(variant.tokens()).second) out.push_back(std::move(variant));
    }
  }
  return out;
}

void BackendSuite::require_complete() const {
  if (!persona_nli) throw ValidationError("backend missing", "persona_nli");
  if (!coherence_nli) throw ValidationError("backend missing", "coherence_nli");
  if (!fluency) throw ValidationError("backend missing", "fluency");
  if (!similarity) throw ValidationError("backend missing", "similarity");
  if (!infiller) throw ValidationError("backend missing", "infiller");
  if (!continuer) throw ValidationError("backend missing", "continuer");
  if (!translator) throw ValidationError("backend missing", "translator");
  if (!responder) throw ValidationError("backend missing", "responder");
  if (!pos_tagger) throw ValidationError("backend missing", "pos_tagger");
}

}  // namespace d3::gateway
