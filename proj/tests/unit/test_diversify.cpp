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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "alignment_cases.hpp"
#include "d3/common/error.hpp"
#include "d3/common/rng.hpp"
#include "d3/corpus/jsonl.hpp"
#include "d3/distill/distill.hpp"
#include "d3/diversify/diversify.hpp"
#include "d3/gateway/registry.hpp"
#include "test_support.hpp"

using namespace d3;
using namespace d3::diversify;
using corpus::Tokens;
using gateway::EntailmentLabel;

namespace {

class RecordingInfiller final : public gateway::Infiller {
 public:
  std::string name() const override { return "recording"; }
  std::vector<Tokens> propose(const Tokens& tokens, const std::vector<std::size_t>& mask,
                              std::size_t n, std::uint64_t) const override {
    masks.push_back(mask);
    std::vector<Tokens> out;
    for (std::size_t i = 0; i < n; ++i) {
      Tokens t = tokens;
      for (auto p : mask) t[p] = "w" + std::to_string(i) + "_" + std::to_string(p);
      out.push_back(t);
    }
    return out;
  }
  mutable std::vector<std::vector<std::size_t>> masks;
};

class RecordingContinuer final : public gateway::Continuer {
 public:
  std::string name() const override { return "recording"; }
  std::vector<Tokens> propose(const Tokens& prefix, std::size_t max_new, std::size_t n,
                              std::uint64_t) const override {
    calls.push_back({prefix, max_new});
    std::vector<Tokens> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(Tokens(max_new, "c" + std::to_string(i)));
    return out;
  }
  mutable std::vector<std::pair<Tokens, std::size_t>> calls;
};

class FixedFluency final : public gateway::FluencyScorer {
 public:
  explicit FixedFluency(double ppl) : FluencyScorer(50.0), ppl_(ppl) {}
  std::string name() const override { return "fixed"; }
  double perplexity(const Tokens&) const override { return ppl_; }

 private:
  double ppl_;
};

class FixedSimilarity final : public gateway::SimilarityScorer {
 public:
  explicit FixedSimilarity(double v) : v_(v) {}
  std::string name() const override { return "fixed"; }
  double similarity(const Tokens&, const Tokens&) const override { return v_; }

 private:
  double v_;
};

class FixedEntailment final : public gateway::EntailmentScorer {
 public:
  explicit FixedEntailment(double p) : p_(p) {}
  std::string name() const override { return "fixed"; }
  gateway::EntailmentJudgment entail(const corpus::Sentence&, const corpus::Sentence&) const override {
    return {p_, p_ >= 0.5 ? EntailmentLabel::entail : EntailmentLabel::neutral};
  }

 private:
  double p_;
};

class ScriptedTranslator final : public gateway::Translator {
 public:
  explicit ScriptedTranslator(std::vector<Tokens> backs) : backs_(std::move(backs)) {}
  std::string name() const override { return "scripted"; }
  std::vector<Tokens> forward(const Tokens& text, std::size_t, std::uint64_t) const override { return {text}; }
  std::vector<Tokens> backward(const Tokens&, std::size_t, std::uint64_t) const override { return backs_; }

 private:
  std::vector<Tokens> backs_;
};

class EmptyResponder final : public gateway::Responder {
 public:
  std::string name() const override { return "empty"; }
  Tokens respond(const corpus::Sentence&, const corpus::Sentence&, std::uint64_t) const override { return {}; }
};

EditedPersona cand(const std::string& text, double f) {
  return EditedPersona{PersonaSentence(text), EditKind::token_level, PersonaSentence("src"), f};
}

gateway::BackendSuite fixture_suite(std::vector<corpus::DistilledSample>* distilled_out = nullptr) {
  auto samples = corpus::load_corpus(test::data_dir() / "fixture_convai2.txt");
  std::vector<corpus::Sentence> fit;
  for (const auto& s : samples)
    for (const auto& p : s.persona) fit.push_back(p);
  auto suite = gateway::make_suite(gateway::BackendSpec{}, fit);
  if (distilled_out) *distilled_out = distill::distill_dataset(samples, *suite.persona_nli, 0.5);
  return suite;
}

}  // namespace

// --- config ----------------------------------------------------------------

TEST(DiversifyConfig, DefaultsAndValidation) {
  DiversifyConfig c;
  EXPECT_DOUBLE_EQ(c.alpha, 0.4);
  EXPECT_DOUBLE_EQ(c.beta, 0.2);
  EXPECT_DOUBLE_EQ(c.gamma, 0.6);
  EXPECT_DOUBLE_EQ(c.mask_ratio, 0.8);
  EXPECT_DOUBLE_EQ(c.phrase_ratio_lo, 0.3);
  EXPECT_DOUBLE_EQ(c.phrase_ratio_hi, 0.6);
  EXPECT_EQ(c.k_candidates, 10u);
  EXPECT_EQ(c.n_personas, 5u);
  EXPECT_EQ(c.n_history, 1u);
  EXPECT_EQ(c.beam, 5u);
  EXPECT_NO_THROW(validate(c));
  c.beta = 0.5;
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(CeilCount, IgnoresFloatNoise) {
  EXPECT_EQ(ceil_count(0.3 * 10), 3u);
  EXPECT_EQ(ceil_count(0.8 * 2), 2u);
  EXPECT_EQ(ceil_count(3.2), 4u);
  EXPECT_EQ(ceil_count(0.0), 0u);
}

// --- token-level editing ---------------------------------------------------

TEST(TokenEdit, MasksCeilOfRatioOverEligible) {
  RecordingInfiller inf;
  gateway::RulePosTagger tagger;
  auto out = edit_persona_token_level(PersonaSentence("i like cats"), 0.8, tagger, inf, 10, 1);
  ASSERT_FALSE(inf.masks.empty());
  for (const auto& m : inf.masks) EXPECT_EQ(m, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(out.size(), 10u);
  for (const auto& e : out) {
    EXPECT_EQ(e.edit_kind, EditKind::token_level);
    EXPECT_EQ(e.source.text(), "i like cats");
    EXPECT_NE(e.sentence.text(), "i like cats");
    EXPECT_EQ(e.sentence.tokens()[0], "i");
  }
}

TEST(TokenEdit, MaskPositionsAreEligibleOnly) {
  RecordingInfiller inf;
  gateway::RulePosTagger tagger;
  const PersonaSentence p("i am a nurse at the big hospital in town");
  edit_persona_token_level(p, 0.5, tagger, inf, 3, 9);
  for (const auto& m : inf.masks) {
    EXPECT_EQ(m.size(), 3u);  // ceil(0.5 * |{nurse, at, big, hospital, in, town}|)
    for (auto pos : m) EXPECT_TRUE(tagger.is_content(p.tokens()[pos]));
  }
}

TEST(TokenEdit, FunctionWordsOnly) {
  RecordingInfiller inf;
  gateway::RulePosTagger tagger;
  EXPECT_TRUE(edit_persona_token_level(PersonaSentence("i am the"), 0.8, tagger, inf, 10, 1).empty());
}

TEST(TokenEdit, UniqueAndAtMostK) {
  auto suite = fixture_suite();
  auto out = edit_persona_token_level(PersonaSentence("i like to ski."), 0.8, *suite.pos_tagger, *suite.infiller, 4, 5);
  EXPECT_LE(out.size(), 4u);
  std::set<std::string> texts;
  for (const auto& e : out) EXPECT_TRUE(texts.insert(e.sentence.text()).second);
}

// --- phrase-level editing --------------------------------------------------

TEST(PhraseEdit, RemovalArithmetic) {
  RecordingContinuer c;
  const PersonaSentence p("a b c d e f g h i j");
  auto out = edit_persona_phrase_level(p, 0.3, 0.3, c, 10, 1);
  ASSERT_FALSE(c.calls.empty());
  EXPECT_EQ(c.calls[0].first.size(), 7u);
  EXPECT_EQ(c.calls[0].second, 3u);
  for (const auto& e : out) {
    EXPECT_EQ(e.edit_kind, EditKind::phrase_level);
    EXPECT_LE(e.sentence.size(), 10u);
    EXPECT_GE(e.sentence.size(), 8u);
  }
}

TEST(PhraseEdit, RemovesAtLeastTwo) {
  RecordingContinuer c;
  edit_persona_phrase_level(PersonaSentence("a b c d"), 0.1, 0.2, c, 2, 1);
  ASSERT_FALSE(c.calls.empty());
  EXPECT_EQ(c.calls[0].first, (Tokens{"a", "b"}));
  EXPECT_EQ(c.calls[0].second, 2u);
}

TEST(PhraseEdit, RatioDrawsStayInRange) {
  RecordingContinuer c;
  const PersonaSentence p("one two three four five six seven eight nine ten eleven twelve thirteen fourteen "
                          "fifteen sixteen seventeen eighteen nineteen twenty");
  for (std::uint64_t seed = 0; seed < 50; ++seed) edit_persona_phrase_level(p, 0.3, 0.6, c, 1, seed);
  for (const auto& [prefix, max_new] : c.calls) {
    const std::size_t removed = 20 - prefix.size();
    EXPECT_GE(removed, 6u);
    EXPECT_LE(removed, 12u);
    EXPECT_EQ(max_new, 6u);
  }
}

TEST(PhraseEdit, TooShort) {
  RecordingContinuer c;
  EXPECT_TRUE(edit_persona_phrase_level(PersonaSentence("hi there"), 0.3, 0.6, c, 10, 1).empty());
  EXPECT_TRUE(c.calls.empty());
  EXPECT_THROW(edit_persona_phrase_level(PersonaSentence("a b c"), 0.6, 0.3, c, 10, 1), ValidationError);
}

// --- persona scoring -------------------------------------------------------

TEST(PersonaScore, LinearCombination) {
  FixedFluency ppl(15);  // normalized 0.3
  FixedSimilarity sim(0.8);
  EXPECT_NEAR(score_edited_persona(PersonaSentence("a"), PersonaSentence("b"), ppl, sim, 0.4), 0.60, 1e-12);
  FixedSimilarity same(1.0);
  EXPECT_NEAR(score_edited_persona(PersonaSentence("a"), PersonaSentence("a"), ppl, same, 0.4), 0.4 * 0.3 + 0.6,
              1e-12);
  EXPECT_THROW(score_edited_persona(PersonaSentence("a"), PersonaSentence("b"), ppl, sim, 1.5), ValidationError);
}

TEST(Select, Examples) {
  auto out = select_top_personas({cand("a", 0.9), cand("b", 0.2), cand("c", 0.5)}, 2);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].sentence.text(), "b");
  EXPECT_EQ(out[1].sentence.text(), "c");
  EXPECT_EQ(select_top_personas({cand("a", 0.1)}, 5).size(), 1u);
  auto ties = select_top_personas({cand("x", 0.3), cand("y", 0.3), cand("z", 0.3)}, 2);
  EXPECT_EQ(ties[0].sentence.text(), "x");
  EXPECT_EQ(ties[1].sentence.text(), "y");
  EXPECT_THROW(select_top_personas({}, 0), ValidationError);
}

TEST(Select, MatchesBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.below(25);
    const std::size_t np = 1 + rng.below(8);
    std::vector<EditedPersona> cands;
    for (std::size_t i = 0; i < n; ++i) cands.push_back(cand("c" + std::to_string(i), rng.below(6) / 5.0));
    // Brute force: repeatedly take the first minimum.
    std::vector<EditedPersona> pool = cands, expect;
    while (!pool.empty() && expect.size() < np) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < pool.size(); ++i)
        if (pool[i].f_score < pool[best].f_score) best = i;
      expect.push_back(pool[best]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    }
    auto got = select_top_personas(cands, np);
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(got[i].sentence.text(), expect[i].sentence.text());
  }
}

// --- response aligning -----------------------------------------------------

TEST(AlignTokenEdit, HandBuiltTable) {
  gateway::RulePosTagger tagger;
  for (const auto& c : test::alignment_cases()) {
    auto got = align_response_token_edit(PersonaSentence(c.edited), PersonaSentence(c.original),
                                         corpus::Utterance(c.response), tagger);
    if (!c.expected) {
      EXPECT_FALSE(got.has_value()) << c.name << ": got " << got->text();
    } else {
      ASSERT_TRUE(got.has_value()) << c.name;
      EXPECT_EQ(got->text(), *c.expected) << c.name;
      EXPECT_EQ(got->size(), corpus::Utterance(c.response).size()) << c.name;
    }
  }
}

TEST(AlignTokenEdit, OnlyChangedTokensChange) {
  gateway::RulePosTagger tagger;
  for (const auto& c : test::alignment_cases()) {
    const PersonaSentence orig(c.original), edited(c.edited);
    const corpus::Utterance r(c.response);
    auto got = align_response_token_edit(edited, orig, r, tagger);
    if (!got) continue;
    std::set<std::string> changed;
    for (std::size_t i = 0; i < orig.size(); ++i)
      if (orig.tokens()[i] != edited.tokens()[i]) changed.insert(orig.tokens()[i]);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (got->tokens()[i] != r.tokens()[i]) EXPECT_TRUE(changed.count(r.tokens()[i])) << c.name;
  }
}

TEST(AlignGenerate, TemplateAndFailures) {
  gateway::TemplateResponder r;
  auto got = align_response_generate(PersonaSentence("i like dogs"), corpus::Utterance("hi"), r);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->text(), "i like dogs too");
  EXPECT_EQ(align_response_generate(PersonaSentence("i like dogs"), corpus::Utterance("hi"), r)->text(), got->text());
  EmptyResponder e;
  EXPECT_FALSE(align_response_generate(PersonaSentence("i like dogs"), corpus::Utterance("hi"), e).has_value());
}

// --- history augmentation --------------------------------------------------

TEST(AugmentHistory, DefaultsGiveTwoVariants) {
  gateway::WordDropoutTranslator t;
  auto v = augment_history(corpus::Utterance("do you have any pets at home ?"), t, 5, 1, 3);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, HistoryKind::original);
  EXPECT_EQ(v[1].kind, HistoryKind::back_translated);
}

TEST(AugmentHistory, NoAugmentation) {
  gateway::WordDropoutTranslator t;
  auto v = augment_history(corpus::Utterance("hello there"), t, 5, 0, 3);
  ASSERT_EQ(v.size(), 1u);
  gateway::IdentityTranslator id;
  EXPECT_EQ(augment_history(corpus::Utterance("hello there"), id, 5, 1, 3).size(), 1u);
}

TEST(AugmentHistory, PicksLowestBleu) {
  const Tokens h = corpus::tokenize("do you have any pets at home today");
  // Three candidates of decreasing similarity to h: BLEU high, low, middle.
  ScriptedTranslator t({corpus::tokenize("do you have any pets at home"), corpus::tokenize("pets ?"),
                        corpus::tokenize("do you have pets today")});
  auto v = augment_history(corpus::Utterance::from_tokens(h), t, 3, 1, 0);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1].utterance.text(), "pets?");
  auto v2 = augment_history(corpus::Utterance::from_tokens(h), t, 3, 2, 0);
  ASSERT_EQ(v2.size(), 3u);
  EXPECT_EQ(v2[2].utterance.text(), "do you have pets today");
}

// --- sample scoring --------------------------------------------------------

TEST(SampleScore, LinearCombination) {
  FixedFluency ppl(5);  // normalized 0.1
  FixedEntailment nli(0.9), nli_c(0.8);
  EXPECT_NEAR(score_sample(corpus::Utterance("r"), PersonaSentence("p"), corpus::Utterance("h"), 0.2, 0.6, ppl, nli,
                           nli_c),
              0.88, 1e-12);
  FixedFluency perfect(0);
  FixedEntailment one(1.0);
  EXPECT_NEAR(score_sample(corpus::Utterance("r"), PersonaSentence("p"), corpus::Utterance("h"), 0.2, 0.6, perfect,
                           one, one),
              1.0, 1e-12);
  EXPECT_THROW(score_sample(corpus::Utterance("r"), PersonaSentence("p"), corpus::Utterance("h"), 0.5, 0.6, ppl, nli,
                            nli_c),
               ValidationError);
}

TEST(SampleScore, DirectionsOfNliQueries) {
  test::LookupEntailment persona({{{"r", "p"}, {1.0, EntailmentLabel::entail}}});
  test::LookupEntailment coherence({{{"h", "r"}, {1.0, EntailmentLabel::entail}}});
  FixedFluency ppl(50);
  EXPECT_NEAR(score_sample(corpus::Utterance("r"), PersonaSentence("p"), corpus::Utterance("h"), 0.2, 0.6, ppl,
                           persona, coherence),
              0.6 + 0.2, 1e-12);
}

// --- thresholding ----------------------------------------------------------

TEST(Threshold, ModesAndNesting) {
  std::vector<DiversifiedSample> scored;
  Rng rng(77);
  for (int i = 0; i < 60; ++i) {
    DiversifiedSample s;
    s.response = corpus::Utterance("r" + std::to_string(i));
    s.s_score = rng.below(20) / 20.0;
    scored.push_back(s);
  }
  EXPECT_EQ(apply_threshold(scored, ThresholdMode::none, 0, 0).size(), scored.size());
  EXPECT_TRUE(apply_threshold(scored, ThresholdMode::absolute, std::numeric_limits<double>::infinity(), 0).empty());

  std::set<std::string> prev;
  for (int t = 0; t <= 10; ++t) {
    auto kept = apply_threshold(scored, ThresholdMode::absolute, t / 10.0, 0);
    std::set<std::string> now;
    for (const auto& k : kept) {
      EXPECT_GE(k.s_score, t / 10.0);
      now.insert(k.response.text());
    }
    if (t > 0) EXPECT_TRUE(std::includes(prev.begin(), prev.end(), now.begin(), now.end()));
    prev = now;
  }

  for (std::size_t target : {0u, 1u, 17u, 60u, 100u}) {
    double eff = 0;
    auto kept = apply_threshold(scored, ThresholdMode::size_matched, 0, target, &eff);
    EXPECT_EQ(kept.size(), std::min<std::size_t>(target, scored.size()));
    for (const auto& k : kept) EXPECT_GE(k.s_score, eff);
    // Kept subsequence stays in generation order.
    std::size_t last = 0;
    for (const auto& k : kept) {
      std::size_t idx = std::stoul(k.response.text().substr(1));
      EXPECT_GE(idx + 1, last + (last == 0 ? 0 : 1));
      last = idx + 1;
    }
  }
}

// --- end to end ------------------------------------------------------------

TEST(DiversifyDataset, FixtureProperties) {
  std::vector<corpus::DistilledSample> distilled;
  auto suite = fixture_suite(&distilled);
  ASSERT_FALSE(distilled.empty());
  DiversifyConfig cfg;
  auto r = diversify_dataset(distilled, cfg, suite, 17, 1);
  EXPECT_EQ(r.samples.size(), std::min(distilled.size(), r.scored.size()));
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  for (const auto& s : r.samples) {
    EXPECT_GE(s.s_score, r.threshold);
    EXPECT_NE(s.persona.sentence.text(), s.persona.source.text());
    if (s.response_kind == ResponseKind::token_edited) EXPECT_EQ(s.persona.edit_kind, EditKind::token_level);
  }
  for (const auto& s : r.scored)
    EXPECT_TRUE(triples.emplace(s.persona.sentence.text(), s.history.text(), s.response.text()).second);

  double total = 0;
  for (int e = 0; e < 2; ++e)
    for (int h = 0; h < 2; ++h)
      for (int k = 0; k < 2; ++k)
        total += r.composition.proportion(static_cast<EditKind>(e), static_cast<HistoryKind>(h),
                                          static_cast<ResponseKind>(k));
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DiversifyDataset, DeterministicAcrossJobs) {
  std::vector<corpus::DistilledSample> distilled;
  auto suite = fixture_suite(&distilled);
  DiversifyConfig cfg;
  auto a = diversify_dataset(distilled, cfg, suite, 17, 1);
  auto b = diversify_dataset(distilled, cfg, suite, 17, 8);
  ASSERT_EQ(a.scored.size(), b.scored.size());
  for (std::size_t i = 0; i < a.scored.size(); ++i) EXPECT_EQ(to_json(a.scored[i]), to_json(b.scored[i]));
  auto c = diversify_dataset(distilled, cfg, suite, 18, 1);
  bool differs = c.scored.size() != a.scored.size();
  for (std::size_t i = 0; !differs && i < a.scored.size(); ++i) differs = to_json(a.scored[i]) != to_json(c.scored[i]);
  EXPECT_TRUE(differs);
}

TEST(DiversifyDataset, EmptyGenerationsAreSkipped) {
  std::vector<corpus::DistilledSample> distilled;
  auto suite = fixture_suite(&distilled);
  suite.responder = std::make_shared<EmptyResponder>();
  auto r = diversify_dataset(distilled, DiversifyConfig{}, suite, 17, 2);
  EXPECT_FALSE(r.skipped.empty());
  for (const auto& s : r.scored) EXPECT_EQ(s.response_kind, ResponseKind::token_edited);
  bool has_reason = false;
  for (const auto& k : r.skipped) has_reason |= k.reason == "empty generation";
  EXPECT_TRUE(has_reason);
}

TEST(DiversifyDataset, InfiniteThresholdIsEmpty) {
  std::vector<corpus::DistilledSample> distilled;
  auto suite = fixture_suite(&distilled);
  DiversifyConfig cfg;
  cfg.threshold_mode = ThresholdMode::absolute;
  cfg.threshold = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(diversify_dataset(distilled, cfg, suite, 17).samples.empty());
}

TEST(DiversifyDataset, JsonRoundTrip) {
  std::vector<corpus::DistilledSample> distilled;
  auto suite = fixture_suite(&distilled);
  auto r = diversify_dataset(distilled, DiversifyConfig{}, suite, 17);
  for (const auto& s : r.samples) {
    auto j = to_json(s);
    EXPECT_EQ(to_json(diversified_sample_from_json(j)), j);
  }
}
