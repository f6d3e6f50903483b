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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "d3/diversify/types.hpp"
#include "d3/gateway/backends.hpp"

namespace d3::diversify {

enum class ThresholdMode {
  absolute,      // keep s >= threshold
  size_matched,  // keep the best round(size_ratio * |distilled|) samples
  none,          // keep everything (the "w/o response filtering" ablation)
};

struct DiversifyConfig {
  double alpha = 0.4;
  double beta = 0.2;
  double gamma = 0.6;
  double mask_ratio = 0.8;
  double phrase_ratio_lo = 0.3;
  double phrase_ratio_hi = 0.6;
  double continuation_ratio = 0.3;
  std::size_t k_candidates = 10;
  std::size_t n_personas = 5;
  std::size_t n_history = 1;
  std::size_t beam = 5;
  ThresholdMode threshold_mode = ThresholdMode::size_matched;
  double threshold = 0.0;
  double size_ratio = 1.0;
};

// Throws ValidationError naming the first out-of-range field.
void validate(const DiversifyConfig& config);

// ceil() that ignores floating-point noise below 1e-9, so 0.3 * 10 counts
// as 3 rather than 4.
std::size_t ceil_count(double x);

// --- persona editing -------------------------------------------------------

// Masks ceil(mask_ratio * |eligible|) informative positions chosen uniformly
// and infills them; returns up to k unique candidates that differ from the
// source. No informative token means no candidates.
std::vector<EditedPersona> edit_persona_token_level(const PersonaSentence& persona, double mask_ratio,
                                                    const gateway::PosTagger& tagger,
                                                    const gateway::Infiller& infiller, std::size_t k,
                                                    std::uint64_t seed);

// Removes the last max(2, ceil(r * |p|)) tokens with r ~ U[lo, hi] and lets
// the continuer rewrite at most ceil(continuation_ratio * |p|) tokens.
// Personas of two tokens or fewer cannot be edited.
std::vector<EditedPersona> edit_persona_phrase_level(const PersonaSentence& persona, double lo, double hi,
                                                     const gateway::Continuer& continuer, std::size_t k,
                                                     std::uint64_t seed, double continuation_ratio = 0.3);

// f = alpha * normalized_ppl(candidate) + (1 - alpha) * similarity(candidate,
// source). Lower is better.
double score_edited_persona(const PersonaSentence& candidate, const PersonaSentence& source,
                            const gateway::FluencyScorer& fluency, const gateway::SimilarityScorer& similarity,
                            double alpha);

// Ascending f_score, ties in input order, at most n_personas.
std::vector<EditedPersona> select_top_personas(std::vector<EditedPersona> candidates, std::size_t n_personas);

// --- response aligning -----------------------------------------------------

// Replaces, throughout the response, every informative persona token that
// the edit changed and that the response contains. Absent when nothing
// overlaps or the two personas are not position-aligned.
std::optional<Utterance> align_response_token_edit(const PersonaSentence& edited, const PersonaSentence& original,
                                                   const Utterance& response, const gateway::PosTagger& tagger);

// Absent when the responder produces nothing.
std::optional<Utterance> align_response_generate(const PersonaSentence& edited, const Utterance& history,
                                                 const gateway::Responder& responder, std::uint64_t seed = 0);

// --- history augmentation --------------------------------------------------

struct HistoryVariant {
  Utterance utterance;
  HistoryKind kind = HistoryKind::original;
};

// The original utterance followed by the n_history back-translations with
// the lowest smoothed sentence BLEU-4 against it (ties in candidate order).
std::vector<HistoryVariant> augment_history(const Utterance& history, const gateway::Translator& translator,
                                            std::size_t beam, std::size_t n_history, std::uint64_t seed);

// --- quality filtering -----------------------------------------------------

// s = beta * (1 - normalized_ppl(r)) + gamma * NLI(r => p)
//     + (1 - beta - gamma) * NLI_c(h => r).  Higher is better.
double score_sample(const Utterance& response, const PersonaSentence& persona, const Utterance& history,
                    double beta, double gamma, const gateway::FluencyScorer& fluency,
                    const gateway::EntailmentScorer& persona_nli, const gateway::EntailmentScorer& coherence_nli);

struct SkipRecord {
  SourceId source_id;
  std::string persona;
  std::string reason;
};

struct DiversifyResult {
  std::vector<DiversifiedSample> samples;  // kept, generation order
  std::vector<DiversifiedSample> scored;   // every unique candidate before filtering
  std::vector<SkipRecord> skipped;
  double threshold = 0.0;                  // effective keep-threshold
  CompositionReport composition;
};

// Keeps candidates per the threshold mode; returns the kept subsequence in
// its original order and writes the effective threshold. In size-matched
// mode score ties at the cut are broken by generation order, so exactly
// min(target, |scored|) survive.
std::vector<DiversifiedSample> apply_threshold(const std::vector<DiversifiedSample>& scored, ThresholdMode mode,
                                               double threshold, std::size_t target, double* effective = nullptr);

// Full diversification of the distilled set. Each distilled sample draws
// from its own stream seeded by (seed, source id), so the output does not
// depend on `jobs`.
DiversifyResult diversify_dataset(const std::vector<corpus::DistilledSample>& distilled,
                                  const DiversifyConfig& config, const gateway::BackendSuite& backends,
                                  std::uint64_t seed, std::size_t jobs = 1);

}  // namespace d3::diversify
