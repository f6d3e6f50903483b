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

#include "d3/gateway/reference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "d3/common/rng.hpp"

namespace d3::gateway {

EntailmentJudgment OverlapEntailment::entail(const Sentence& premise, const Sentence& hypothesis) const {
  std::set<std::string> content;
  for (const auto& tok : hypothesis.tokens())
    if (tagger_->is_content(tok)) content.insert(tok);

  double prob = 0.0;
  if (content.empty()) {
    prob = premise.tokens() == hypothesis.tokens() && !premise.empty() ? 1.0 : 0.0;
  } else {
    const std::unordered_set<std::string> present(premise.tokens().begin(), premise.tokens().end());
    std::size_t hit = 0;
    for (const auto& tok : content) hit += present.count(tok);
    prob = static_cast<double>(hit) / static_cast<double>(content.size());
  }
  return {prob, prob >= threshold_ ? EntailmentLabel::entail : EntailmentLabel::neutral};
}

namespace {

constexpr char kPad = '\x02';
constexpr char kEnd = '\x03';

std::string char_stream(const Tokens& tokens) { return corpus::join(tokens) + kEnd; }

}  // namespace

CharNgramFluency::CharNgramFluency(const std::vector<Tokens>& training, std::size_t order, double add_k,
                                   double normalizer)
    : FluencyScorer(normalizer), order_(std::max<std::size_t>(order, 1)), add_k_(add_k) {
  std::unordered_set<char> alphabet{kEnd};
  for (const auto& sentence : training) {
    const std::string text = char_stream(sentence);
    std::string context(order_ - 1, kPad);
    for (char c : text) {
      alphabet.insert(c);
      counts_[context][c] += 1.0;
      context_totals_[context] += 1.0;
      if (!context.empty()) {
        context.erase(context.begin());
        context.push_back(c);
      }
    }
  }
  // One extra slot for characters never seen in training.
  vocab_size_ = static_cast<double>(alphabet.size() + 1);
}

double CharNgramFluency::perplexity(const Tokens& text) const {
  const std::string stream = char_stream(text);
  std::string context(order_ - 1, kPad);
  double log_sum = 0.0;
  for (char c : stream) {
    double count = 0.0, total = 0.0;
    if (auto it = counts_.find(context); it != counts_.end()) {
      if (auto jt = it->second.find(c); jt != it->second.end()) count = jt->second;
      total = context_totals_.at(context);
    }
    log_sum += std::log((count + add_k_) / (total + add_k_ * vocab_size_));
    if (!context.empty()) {
      context.erase(context.begin());
      context.push_back(c);
    }
  }
  return std::exp(-log_sum / static_cast<double>(stream.size()));
}

double JaccardSimilarity::similarity(const Tokens& a, const Tokens& b) const {
  const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

TableInfiller TableInfiller::from_corpus(const std::vector<Tokens>& sentences, const PosTagger& tagger,
                                         std::size_t max_alternatives) {
  std::map<std::string, std::map<std::string, double>> by_context;
  std::map<std::string, std::set<std::string>> contexts_of;
  std::map<std::string, PosTag> tags;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const PosTag tag = tagger.tag(s[i]);
      if (!is_target_tag(tag)) continue;
      const std::string left = i ? s[i - 1] : "<s>";
      by_context[left][s[i]] += 1.0;
      contexts_of[s[i]].insert(left);
      tags.emplace(s[i], tag);
    }
  }

  Table table;
  for (const auto& [word, contexts] : contexts_of) {
    std::map<std::string, double> score;
    for (const auto& ctx : contexts)
      for (const auto& [other, count] : by_context[ctx])
        if (other != word && tags[other] == tags[word]) score[other] += count;
    std::vector<std::pair<std::string, double>> ranked(score.begin(), score.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > max_alternatives) ranked.resize(max_alternatives);
    if (ranked.empty()) continue;
    auto& alts = table[word];
    for (auto& r : ranked) alts.push_back(r.first);
  }
  return TableInfiller(std::move(table));
}

std::vector<Tokens> TableInfiller::propose(const Tokens& tokens, const std::vector<std::size_t>& mask_positions,
                                           std::size_t n, std::uint64_t seed) const {
  std::vector<Tokens> out;
  const std::size_t draws = 4 * n;
  for (std::size_t d = 0; d < draws; ++d) {
    Tokens seq = tokens;
    for (auto p : mask_positions) seq[p] = std::string(kMaskSymbol);
    std::uint64_t radix = 1;
    for (auto p : mask_positions) {
      auto it = table_.find(tokens[p]);
      if (it == table_.end()) {
        seq[p] = tokens[p];
        continue;
      }
      const auto& alts = it->second;
      const std::string left = p ? seq[p - 1] : "<s>";
      const std::uint64_t offset = derive_seed(seed, left + "#" + std::to_string(p)) % alts.size();
      seq[p] = alts[(offset + d / radix) % alts.size()];
      radix = std::min<std::uint64_t>(radix * alts.size(), std::uint64_t{1} << 40);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

NgramContinuer NgramContinuer::from_corpus(const std::vector<Tokens>& sentences) {
  std::map<std::string, Counts> bigrams;
  Counts unigrams;
  for (const auto& s : sentences) {
    std::string prev = "<s>";
    for (const auto& tok : s) {
      bigrams[prev][tok] += 1.0;
      unigrams[tok] += 1.0;
      prev = tok;
    }
    bigrams[prev]["</s>"] += 1.0;
  }
  return NgramContinuer(std::move(bigrams), std::move(unigrams));
}

namespace {

std::string sample(const NgramContinuer::Counts& counts, Rng& rng) {
  std::vector<double> weights;
  std::vector<const std::string*> keys;
  for (const auto& [k, c] : counts) {
    keys.push_back(&k);
    weights.push_back(c);
  }
  return *keys[rng.weighted(weights)];
}

}  // namespace

std::vector<Tokens> NgramContinuer::propose(const Tokens& prefix, std::size_t max_new, std::size_t n,
                                            std::uint64_t seed) const {
  std::vector<Tokens> out;
  if (unigrams_.empty() && bigrams_.empty()) return out;
  for (std::size_t d = 0; d < 4 * n; ++d) {
    Rng rng(derive_seed(seed, d));
    const std::size_t target = 1 + static_cast<std::size_t>(rng.below(max_new));
    Tokens cont;
    std::string prev = prefix.back();
    while (cont.size() < target) {
      auto it = bigrams_.find(prev);
      std::string next;
      if (it != bigrams_.end()) next = sample(it->second, rng);
      if (next.empty() || next == "</s>") {
        if (!cont.empty() || unigrams_.empty()) break;
        next = sample(unigrams_, rng);
      }
      cont.push_back(next);
      prev = next;
    }
    if (!cont.empty()) out.push_back(std::move(cont));
  }
  return out;
}

namespace {

template <typename Edit>
std::vector<Tokens> perturbed_beam(const Tokens& text, std::size_t beam, std::uint64_t seed, std::size_t slots,
                                   Edit edit) {
  std::vector<Tokens> out{text};
  if (beam <= 1 || slots == 0) return out;
  Rng rng(seed);
  for (auto pos : rng.choose(slots, beam - 1)) out.push_back(edit(text, pos));
  return out;
}

Tokens drop_at(const Tokens& t, std::size_t pos) {
  Tokens out = t;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
  return out;
}

Tokens swap_at(const Tokens& t, std::size_t pos) {
  Tokens out = t;
  std::swap(out[pos], out[pos + 1]);
  return out;
}

}  // namespace

std::vector<Tokens> WordDropoutTranslator::forward(const Tokens& text, std::size_t beam, std::uint64_t seed) const {
  return perturbed_beam(text, beam, seed, text.size() > 1 ? text.size() : 0, drop_at);
}

std::vector<Tokens> WordDropoutTranslator::backward(const Tokens& text, std::size_t beam,
                                                    std::uint64_t seed) const {
  return perturbed_beam(text, beam, derive_seed(seed, "backward"), text.size() > 1 ? text.size() : 0, drop_at);
}

std::vector<Tokens> WordSwapTranslator::forward(const Tokens& text, std::size_t beam, std::uint64_t seed) const {
  return perturbed_beam(text, beam, seed, text.size() > 1 ? text.size() - 1 : 0, swap_at);
}

std::vector<Tokens> WordSwapTranslator::backward(const Tokens& text, std::size_t beam, std::uint64_t seed) const {
  return perturbed_beam(text, beam, derive_seed(seed, "backward"), text.size() > 1 ? text.size() - 1 : 0, swap_at);
}

Tokens TemplateResponder::respond(const Sentence& persona, const Sentence&, std::uint64_t) const {
  Tokens out = persona.tokens();
  while (!out.empty() && corpus::is_punctuation(out.back())) out.pop_back();
  if (out.empty()) return out;
  out.push_back("too");
  return out;
}

}  // namespace d3::gateway
