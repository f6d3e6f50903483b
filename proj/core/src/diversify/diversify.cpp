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

#include "d3/diversify/diversify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "d3/common/error.hpp"
#include "d3/common/parallel.hpp"
#include "d3/common/rng.hpp"
#include "d3/metrics/bleu.hpp"

namespace d3::diversify {

using corpus::Tokens;

namespace {

constexpr std::size_t kEditRounds = 3;

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ValidationError(what, key);
}

}  // namespace

void validate(const DiversifyConfig& c) {
  require(c.alpha >= 0.0 && c.alpha <= 1.0, "alpha", "must lie in [0, 1]");
  require(c.beta >= 0.0 && c.beta <= 1.0, "beta", "must lie in [0, 1]");
  require(c.gamma >= 0.0 && c.gamma <= 1.0, "gamma", "must lie in [0, 1]");
  require(c.beta + c.gamma <= 1.0 + 1e-12, "gamma", "beta + gamma must not exceed 1");
  require(c.mask_ratio > 0.0 && c.mask_ratio <= 1.0, "mask_ratio", "must lie in (0, 1]");
  require(c.phrase_ratio_lo > 0.0 && c.phrase_ratio_lo <= c.phrase_ratio_hi && c.phrase_ratio_hi < 1.0,
          "phrase_ratio", "needs 0 < lo <= hi < 1");
  require(c.continuation_ratio > 0.0 && c.continuation_ratio <= 1.0, "continuation_ratio", "must lie in (0, 1]");
  require(c.k_candidates >= 1, "k_candidates", "must be >= 1");
  require(c.n_personas >= 1, "n_personas", "must be >= 1");
  require(c.beam >= 1, "beam", "must be >= 1");
  require(c.size_ratio >= 0.0, "size_ratio", "must be >= 0");
}

std::size_t ceil_count(double x) {
  if (x <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

std::vector<EditedPersona> edit_persona_token_level(const PersonaSentence& persona, double mask_ratio,
                                                    const gateway::PosTagger& tagger,
                                                    const gateway::Infiller& infiller, std::size_t k,
                                                    std::uint64_t seed) {
  if (!(mask_ratio > 0.0 && mask_ratio <= 1.0)) throw ValidationError("must lie in (0, 1]", "mask_ratio");
  const Tokens& tokens = persona.tokens();
  const auto tags = tagger.tag_all(tokens);
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (gateway::is_target_tag(tags[i])) eligible.push_back(i);
  if (eligible.empty() || k == 0) return {};

  const std::size_t n_mask = std::min(eligible.size(), ceil_count(mask_ratio * static_cast<double>(eligible.size())));
  std::vector<EditedPersona> out;
  std::set<Tokens> seen{tokens};
  for (std::size_t round = 0; round < kEditRounds && out.size() < k; ++round) {
    Rng rng(derive_seed(seed, round));
    std::vector<std::size_t> positions;
    for (auto idx : rng.choose(eligible.size(), n_mask)) positions.push_back(eligible[idx]);
    for (auto& cand : infiller.infill(tokens, positions, k, derive_seed(seed, "infill/" + std::to_string(round)))) {
      if (out.size() == k) break;
      PersonaSentence edited = PersonaSentence::from_tokens(cand);
      if (edited.empty() || edited.text() == persona.text() || !seen.insert(edited.tokens()).second) continue;
      out.push_back(EditedPersona{std::move(edited), EditKind::token_level, persona, 0.0});
    }
  }
  return out;
}

std::vector<EditedPersona> edit_persona_phrase_level(const PersonaSentence& persona, double lo, double hi,
                                                     const gateway::Continuer& continuer, std::size_t k,
                                                     std::uint64_t seed, double continuation_ratio) {
  if (!(lo > 0.0 && lo <= hi && hi < 1.0)) throw ValidationError("needs 0 < lo <= hi < 1", "phrase_ratio");
  const Tokens& tokens = persona.tokens();
  const std::size_t len = tokens.size();
  if (len <= 2 || k == 0) return {};

  const std::size_t max_new = std::max<std::size_t>(1, ceil_count(continuation_ratio * static_cast<double>(len)));
  std::vector<EditedPersona> out;
  std::set<Tokens> seen{tokens};
  for (std::size_t round = 0; round < kEditRounds && out.size() < k; ++round) {
    Rng rng(derive_seed(seed, round));
    const double r = rng.uniform(lo, hi);
    const std::size_t removal = std::min(len - 1, std::max<std::size_t>(2, ceil_count(r * static_cast<double>(len))));
    const Tokens prefix(tokens.begin(), tokens.end() - static_cast<std::ptrdiff_t>(removal));
    for (auto& cand : continuer.continue_prefix(prefix, max_new, k - out.size(),
                                                derive_seed(seed, "continue/" + std::to_string(round)))) {
      PersonaSentence edited = PersonaSentence::from_tokens(cand);
      if (edited.empty() || edited.text() == persona.text() || !seen.insert(edited.tokens()).second) continue;
      out.push_back(EditedPersona{std::move(edited), EditKind::phrase_level, persona, 0.0});
      if (out.size() == k) break;
    }
  }
  return out;
}

double score_edited_persona(const PersonaSentence& candidate, const PersonaSentence& source,
                            const gateway::FluencyScorer& fluency, const gateway::SimilarityScorer& similarity,
                            double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("must lie in [0, 1]", "alpha");
  return alpha * fluency.normalized_ppl(candidate.tokens()) +
         (1.0 - alpha) * similarity.similarity(candidate.tokens(), source.tokens());
}

std::vector<EditedPersona> select_top_personas(std::vector<EditedPersona> candidates, std::size_t n_personas) {
  if (n_personas == 0) throw ValidationError("must be >= 1", "n_personas");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const EditedPersona& a, const EditedPersona& b) { return a.f_score < b.f_score; });
  if (candidates.size() > n_personas) candidates.resize(n_personas);
  return candidates;
}

std::optional<Utterance> align_response_token_edit(const PersonaSentence& edited, const PersonaSentence& original,
                                                   const Utterance& response, const gateway::PosTagger& tagger) {
  const Tokens& after = edited.tokens();
  const Tokens& before = original.tokens();
  if (after.size() != before.size()) return std::nullopt;
  const std::set<std::string> in_response(response.tokens().begin(), response.tokens().end());

  std::map<std::string, std::string> replace;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] == after[i] || !in_response.count(before[i]) || !tagger.is_content(before[i])) continue;
    replace.emplace(before[i], after[i]);
  }
  if (replace.empty()) return std::nullopt;

  Tokens aligned = response.tokens();
  for (auto& tok : aligned)
    if (auto it = replace.find(tok); it != replace.end()) tok = it->second;
  return Utterance::from_tokens(aligned);
}

std::optional<Utterance> align_response_generate(const PersonaSentence& edited, const Utterance& history,
                                                 const gateway::Responder& responder, std::uint64_t seed) {
  Tokens generated = responder.respond(edited, history, seed);
  if (generated.empty()) return std::nullopt;
  Utterance out = Utterance::from_tokens(generated);
  if (out.empty()) return std::nullopt;
  return out;
}

std::vector<HistoryVariant> augment_history(const Utterance& history, const gateway::Translator& translator,
                                            std::size_t beam, std::size_t n_history, std::uint64_t seed) {
  if (beam == 0) throw ValidationError("must be >= 1", "beam");
  std::vector<HistoryVariant> out{{history, HistoryKind::original}};
  if (n_history == 0) return out;

  auto candidates = translator.back_translate(history, beam, seed);
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    ranked.emplace_back(metrics::sentence_bleu(candidates[i].tokens(), {history.tokens()}), i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < ranked.size() && i < n_history; ++i)
    out.push_back({candidates[ranked[i].second], HistoryKind::back_translated});
  return out;
}

double score_sample(const Utterance& response, const PersonaSentence& persona, const Utterance& history,
                    double beta, double gamma, const gateway::FluencyScorer& fluency,
                    const gateway::EntailmentScorer& persona_nli, const gateway::EntailmentScorer& coherence_nli) {
  if (beta < 0.0 || gamma < 0.0 || beta + gamma > 1.0 + 1e-12)
    throw ValidationError("needs beta, gamma >= 0 and beta + gamma <= 1", "beta");
  const double fluent = 1.0 - fluency.normalized_ppl(response.tokens());
  const double consistent = persona_nli.entail(response, persona).entail_prob;
  const double coherent = coherence_nli.entail(history, response).entail_prob;
  return beta * fluent + gamma * consistent + (1.0 - beta - gamma) * coherent;
}

std::vector<DiversifiedSample> apply_threshold(const std::vector<DiversifiedSample>& scored, ThresholdMode mode,
                                               double threshold, std::size_t target, double* effective) {
  std::vector<DiversifiedSample> kept;
  double used = -std::numeric_limits<double>::infinity();
  switch (mode) {
    case ThresholdMode::none:
      kept = scored;
      break;
    case ThresholdMode::absolute:
      used = threshold;
      for (const auto& s : scored)
        if (s.s_score >= threshold) kept.push_back(s);
      break;
    case ThresholdMode::size_matched: {
      std::vector<std::size_t> order(scored.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return scored[a].s_score > scored[b].s_score; });
      const std::size_t take = std::min(target, order.size());
      if (take == 0) {
        used = std::numeric_limits<double>::infinity();
        break;
      }
      order.resize(take);
      used = scored[order.back()].s_score;
      std::sort(order.begin(), order.end());
      for (auto i : order) kept.push_back(scored[i]);
      break;
    }
  }
  if (effective) *effective = used;
  return kept;
}

namespace {

struct UnitOutput {
  std::vector<DiversifiedSample> candidates;
  std::vector<SkipRecord> skipped;
};

UnitOutput diversify_unit(const corpus::DistilledSample& d, const DiversifyConfig& cfg,
                          const gateway::BackendSuite& be, std::uint64_t unit_seed) {
  UnitOutput out;
  auto skip = [&](const std::string& persona, const std::string& reason) {
    out.skipped.push_back({d.source_id, persona, reason});
  };

  auto personas = edit_persona_token_level(d.persona, cfg.mask_ratio, *be.pos_tagger, *be.infiller,
                                           cfg.k_candidates, derive_seed(unit_seed, "token"));
  for (auto& p : edit_persona_phrase_level(d.persona, cfg.phrase_ratio_lo, cfg.phrase_ratio_hi, *be.continuer,
                                           cfg.k_candidates, derive_seed(unit_seed, "phrase"),
                                           cfg.continuation_ratio))
    personas.push_back(std::move(p));
  if (personas.empty()) {
    skip(d.persona.text(), "no edited persona candidates");
    return out;
  }
  for (auto& p : personas)
    p.f_score = score_edited_persona(p.sentence, p.source, *be.fluency, *be.similarity, cfg.alpha);
  const auto selected = select_top_personas(std::move(personas), cfg.n_personas);

  const auto histories =
      augment_history(d.history, *be.translator, cfg.beam, cfg.n_history, derive_seed(unit_seed, "history"));

  for (std::size_t j = 0; j < selected.size(); ++j) {
    const auto& persona = selected[j];
    std::optional<Utterance> response;
    ResponseKind kind = ResponseKind::generated;
    try {
      if (persona.edit_kind == EditKind::token_level) {
        response = align_response_token_edit(persona.sentence, persona.source, d.response, *be.pos_tagger);
        if (response) kind = ResponseKind::token_edited;
      }
      if (!response)
        response = align_response_generate(persona.sentence, d.history, *be.responder,
                                           derive_seed(unit_seed, "respond/" + std::to_string(j)));
    } catch (const std::exception& e) {
      skip(persona.sentence.text(), std::string("responder failed: ") + e.what());
      continue;
    }
    if (!response) {
      skip(persona.sentence.text(), "empty generation");
      continue;
    }
    for (const auto& h : histories) {
      DiversifiedSample s{persona, h.utterance, h.kind, *response, kind, 0.0, d.source_id};
      s.s_score = score_sample(s.response, s.persona.sentence, s.history, cfg.beta, cfg.gamma, *be.fluency,
                               *be.persona_nli, *be.coherence_nli);
      out.candidates.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

DiversifyResult diversify_dataset(const std::vector<corpus::DistilledSample>& distilled,
                                  const DiversifyConfig& config, const gateway::BackendSuite& backends,
                                  std::uint64_t seed, std::size_t jobs) {
  validate(config);
  backends.require_complete();

  auto units = parallel_map(distilled, jobs, [&](const corpus::DistilledSample& d) {
    return diversify_unit(d, config, backends, derive_seed(seed, "diversify/" + d.source_id.key()));
  });

  DiversifyResult result;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (auto& u : units) {
    for (auto& s : u.candidates)
      if (seen.emplace(s.persona.sentence.text(), s.history.text(), s.response.text()).second)
        result.scored.push_back(std::move(s));
    for (auto& k : u.skipped) result.skipped.push_back(std::move(k));
  }

  const auto target = static_cast<std::size_t>(std::llround(config.size_ratio * static_cast<double>(distilled.size())));
  result.samples = apply_threshold(result.scored, config.threshold_mode, config.threshold, target, &result.threshold);
  result.composition = compose(result.samples);
  return result;
}

}  // namespace d3::diversify
