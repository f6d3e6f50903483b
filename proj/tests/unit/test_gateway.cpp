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
#include <thread>

#include "d3/common/error.hpp"
#include "d3/corpus/tokenizer.hpp"
#include "d3/gateway/pos.hpp"
#include "d3/gateway/reference.hpp"
#include "d3/gateway/registry.hpp"
#include "d3/gateway/remote.hpp"
#include "test_support.hpp"

using namespace d3;
using namespace d3::gateway;
using corpus::Sentence;
using corpus::Tokens;

namespace {

class FixedFluency final : public FluencyScorer {
 public:
  explicit FixedFluency(double ppl, double c = 50.0) : FluencyScorer(c), ppl_(ppl) {}
  std::string name() const override { return "fixed"; }
  double perplexity(const Tokens&) const override { return ppl_; }

 private:
  double ppl_;
};

// Proposes whatever it is told to, including contract violations.
class RawInfiller final : public Infiller {
 public:
  explicit RawInfiller(std::vector<Tokens> out) : out_(std::move(out)) {}
  std::string name() const override { return "raw"; }
  std::vector<Tokens> propose(const Tokens&, const std::vector<std::size_t>&, std::size_t,
                              std::uint64_t) const override {
    return out_;
  }

 private:
  std::vector<Tokens> out_;
};

class RawContinuer final : public Continuer {
 public:
  explicit RawContinuer(std::vector<Tokens> out) : out_(std::move(out)) {}
  std::string name() const override { return "raw"; }
  std::vector<Tokens> propose(const Tokens&, std::size_t, std::size_t, std::uint64_t) const override { return out_; }

 private:
  std::vector<Tokens> out_;
};

bool is_subsequence(const Tokens& sub, const Tokens& full) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < full.size() && j < sub.size(); ++i) {
    if (full[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

std::vector<Tokens> fit_corpus() {
  return {corpus::tokenize("i like cats ."), corpus::tokenize("i like dogs ."), corpus::tokenize("i have two cats ."),
          corpus::tokenize("i work at a farm ."), corpus::tokenize("my dog likes to run .")};
}

}  // namespace

// --- POS -------------------------------------------------------------------

TEST(Pos, TargetTags) {
  for (auto t : {PosTag::VERB, PosTag::NOUN, PosTag::PROPN, PosTag::NUM, PosTag::ADV, PosTag::ADP, PosTag::ADJ}) {
    EXPECT_TRUE(is_target_tag(t)) << to_string(t);
  }
  for (auto t : {PosTag::PRON, PosTag::DET, PosTag::AUX, PosTag::CCONJ, PosTag::PUNCT, PosTag::PART}) {
    EXPECT_FALSE(is_target_tag(t)) << to_string(t);
  }
}

TEST(Pos, RuleTaggerClosedAndOpenClass) {
  RulePosTagger t;
  EXPECT_EQ(t.tag("i"), PosTag::PRON);
  EXPECT_EQ(t.tag("the"), PosTag::DET);
  EXPECT_EQ(t.tag("and"), PosTag::CCONJ);
  EXPECT_EQ(t.tag("."), PosTag::PUNCT);
  EXPECT_EQ(t.tag("at"), PosTag::ADP);
  EXPECT_EQ(t.tag("42"), PosTag::NUM);
  EXPECT_EQ(t.tag("quickly"), PosTag::ADV);
  EXPECT_EQ(t.tag("running"), PosTag::VERB);
  EXPECT_EQ(t.tag("cats"), PosTag::NOUN);
  EXPECT_TRUE(t.is_content("like"));
  EXPECT_FALSE(t.is_content("am"));
}

TEST(Pos, TagNamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(PosTag::X); ++i) {
    auto tag = static_cast<PosTag>(i);
    EXPECT_EQ(parse_pos_tag(to_string(tag)), tag);
  }
  EXPECT_FALSE(parse_pos_tag("BOGUS").has_value());
}

// --- fluency ---------------------------------------------------------------

TEST(Fluency, NormalizedValues) {
  EXPECT_DOUBLE_EQ(FixedFluency(25).normalized_ppl({"a"}), 0.5);
  EXPECT_DOUBLE_EQ(FixedFluency(200).normalized_ppl({"a"}), 1.0);
  EXPECT_DOUBLE_EQ(FixedFluency(10, 20).normalized_ppl({"a"}), 0.5);
  EXPECT_THROW(FixedFluency(10).normalized_ppl({}), Error);
}

TEST(Fluency, CharNgramPrefersInDomain) {
  CharNgramFluency lm(fit_corpus());
  const Tokens in_domain = corpus::tokenize("i like cats .");
  const Tokens junk = {"qzx", "vvk", "jjq", "wpf"};
  EXPECT_LT(lm.normalized_ppl(in_domain), lm.normalized_ppl(junk));
  for (const auto& s : fit_corpus()) {
    double v = lm.normalized_ppl(s);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_EQ(lm.perplexity(in_domain), lm.perplexity(in_domain));
}

// --- entailment ------------------------------------------------------------

TEST(Overlap, SpecCases) {
  OverlapEntailment nli(test::rule_tagger(), 0.5);
  auto j = nli.entail(Sentence("yes i have two cats"), Sentence("i like cats"));
  EXPECT_DOUBLE_EQ(j.entail_prob, 0.5);
  EXPECT_EQ(j.label, EntailmentLabel::entail);
  auto k = nli.entail(Sentence("yes i have two cats"), Sentence("i work at a farm"));
  EXPECT_DOUBLE_EQ(k.entail_prob, 0.0);
  EXPECT_EQ(k.label, EntailmentLabel::neutral);
  EXPECT_DOUBLE_EQ(nli.entail(Sentence("i like cats"), Sentence("i like cats")).entail_prob, 1.0);
}

TEST(Overlap, LabelFollowsThreshold) {
  OverlapEntailment strict(test::rule_tagger(), 0.99);
  auto j = strict.entail(Sentence("yes i have two cats"), Sentence("i like cats"));
  EXPECT_EQ(j.label, EntailmentLabel::neutral);
}

TEST(Overlap, NotAssumedSymmetric) {
  OverlapEntailment nli(test::rule_tagger());
  Sentence a("i like cats"), b("i like cats and dogs very much");
  EXPECT_DOUBLE_EQ(nli.entail(b, a).entail_prob, 1.0);
  EXPECT_LT(nli.entail(a, b).entail_prob, 1.0);
}

// --- similarity ------------------------------------------------------------

TEST(Jaccard, Values) {
  JaccardSimilarity s;
  EXPECT_DOUBLE_EQ(s.similarity({"a", "b"}, {"b", "c"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.similarity({"a"}, {"a"}), 1.0);
  EXPECT_DOUBLE_EQ(s.similarity({"a"}, {"b"}), 0.0);
}

// --- infilling -------------------------------------------------------------

TEST(Infill, EmptyMaskReturnsInput) {
  TableInfiller inf(TableInfiller::Table{{"cats", {"dogs"}}});
  auto out = inf.infill({"i", "like", "cats"}, {}, 3, 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (Tokens{"i", "like", "cats"}));
}

TEST(Infill, SynonymTable) {
  TableInfiller inf(TableInfiller::Table{{"cats", {"dogs", "fish"}}});
  auto out = inf.infill({"i", "like", "cats"}, {2}, 2, 0);
  ASSERT_EQ(out.size(), 2u);
  std::vector<std::string> last = {out[0].back(), out[1].back()};
  std::sort(last.begin(), last.end());
  EXPECT_EQ(last, (std::vector<std::string>{"dogs", "fish"}));
  for (const auto& o : out) {
    EXPECT_EQ(o.size(), 3u);
    EXPECT_EQ(o[0], "i");
    EXPECT_EQ(o[1], "like");
  }
}

TEST(Infill, ContractFiltersViolations) {
  RawInfiller raw({{"i", "like", "dogs"},
                   {"i", "like", "dogs"},                      // duplicate
                   {"we", "like", "dogs"},                     // changed an unmasked position
                   {"i", "like", std::string(kMaskSymbol)},    // mask leaked
                   {"i", "like", "<eos>"},                     // special symbol
                   {"i", "like"},                              // wrong length
                   {"i", "like", "fish"}});
  auto out = raw.infill({"i", "like", "cats"}, {2}, 5, 0);
  EXPECT_EQ(out, (std::vector<Tokens>{{"i", "like", "dogs"}, {"i", "like", "fish"}}));
  EXPECT_EQ(raw.infill({"i", "like", "cats"}, {2}, 1, 0).size(), 1u);
}

TEST(Infill, OutOfRangeMaskIsError) {
  TableInfiller inf({});
  EXPECT_THROW(inf.infill({"a"}, {3}, 1, 0), Error);
}

TEST(Infill, Deterministic) {
  auto inf = TableInfiller::from_corpus(fit_corpus(), RulePosTagger{});
  Tokens t = corpus::tokenize("i like cats .");
  EXPECT_EQ(inf.infill(t, {1, 2}, 5, 99), inf.infill(t, {1, 2}, 5, 99));
}

// --- continuation ----------------------------------------------------------

TEST(Continue, UnigramOnly) {
  NgramContinuer c({}, {{"cats", 1.0}});
  auto out = c.continue_prefix({"i", "like"}, 1, 1, 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (Tokens{"i", "like", "cats"}));
}

TEST(Continue, ContractBounds) {
  auto c = NgramContinuer::from_corpus(fit_corpus());
  const Tokens prefix = {"i", "like"};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto out = c.continue_prefix(prefix, 3, 4, seed);
    EXPECT_LE(out.size(), 4u);
    for (const auto& o : out) {
      ASSERT_GE(o.size(), prefix.size() + 1);
      ASSERT_LE(o.size(), prefix.size() + 3);
      EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), o.begin()));
      for (const auto& t : o) EXPECT_FALSE(is_special_symbol(t));
    }
    EXPECT_EQ(c.continue_prefix(prefix, 3, 1, seed).size(), std::min<std::size_t>(1, out.size()));
  }
}

TEST(Continue, ContractFiltersViolations) {
  RawContinuer raw({{"a", "b", "c"}, {}, {"<bos>"}, {"x"}, {"x"}, {"y"}});
  auto out = raw.continue_prefix({"p"}, 2, 5, 0);
  EXPECT_EQ(out, (std::vector<Tokens>{{"p", "a", "b"}, {"p", "x"}, {"p", "y"}}));
  EXPECT_THROW(raw.continue_prefix({}, 2, 1, 0), Error);
  EXPECT_THROW(raw.continue_prefix({"p"}, 0, 1, 0), Error);
}

// --- back translation ------------------------------------------------------

TEST(BackTranslate, IdentityBeamOneIsEmpty) {
  IdentityTranslator t;
  EXPECT_TRUE(t.back_translate(Sentence("hello how are you"), 1, 0).empty());
}

TEST(BackTranslate, AtMostBeamSquared) {
  WordDropoutTranslator t;
  Sentence s("well , hello there how are you doing today my friend");
  for (std::size_t beam = 1; beam <= 5; ++beam) {
    auto v = t.back_translate(s, beam, 7);
    EXPECT_LE(v.size(), beam * beam);
    for (const auto& x : v) EXPECT_NE(x.tokens(), s.tokens());
  }
}

TEST(BackTranslate, DropoutYieldsProperSubsequences) {
  WordDropoutTranslator t;
  Sentence s("hello how are you");
  auto v = t.back_translate(s, 2, 3);
  EXPECT_FALSE(v.empty());
  for (const auto& x : v) {
    EXPECT_LT(x.size(), s.size());
    EXPECT_TRUE(is_subsequence(x.tokens(), s.tokens()));
  }
  EXPECT_EQ(t.back_translate(s, 2, 3), v);
}

TEST(BackTranslate, SwapKeepsMultiset) {
  WordSwapTranslator t;
  Sentence s("one two three four five");
  for (const auto& x : t.back_translate(s, 3, 1)) {
    auto a = x.tokens(), b = s.tokens();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

// --- responder -------------------------------------------------------------

TEST(Responder, Template) {
  TemplateResponder r;
  EXPECT_EQ(r.respond(Sentence("i like dogs"), Sentence("hi"), 0), (Tokens{"i", "like", "dogs", "too"}));
  EXPECT_EQ(r.respond(Sentence("i like dogs."), Sentence("hi"), 0), (Tokens{"i", "like", "dogs", "too"}));
  EXPECT_TRUE(r.respond(Sentence("..."), Sentence("hi"), 0).empty());
}

// --- registry --------------------------------------------------------------

TEST(Registry, DefaultSuiteIsComplete) {
  std::vector<Sentence> fit;
  for (const auto& t : fit_corpus()) fit.push_back(Sentence::from_tokens(t));
  auto suite = make_suite(BackendSpec{}, fit);
  EXPECT_NO_THROW(suite.require_complete());
  auto names = describe(suite);
  EXPECT_EQ(names.size(), 9u);
  EXPECT_EQ(names[0].first, "persona_nli");
  EXPECT_EQ(names[0].second, "overlap");
  EXPECT_DOUBLE_EQ(suite.fluency->normalizer(), 50.0);
}

TEST(Registry, UnknownNameNamesRole) {
  BackendSpec spec;
  spec.translator = "google";
  try {
    make_suite(spec, {});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "backends.translator");
  }
}

TEST(Registry, MissingMember) {
  BackendSuite s;
  EXPECT_THROW(s.require_complete(), ValidationError);
}

// --- remote protocol -------------------------------------------------------

class RemoteTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<Sentence> fit;
    for (const auto& t : fit_corpus()) fit.push_back(Sentence::from_tokens(t));
    local_ = make_suite(BackendSpec{}, fit);
    server_ = std::make_unique<BackendServer>(local_, 0);
    thread_ = std::thread([this] { server_->run(); });
    remote_ = make_remote_suite(std::make_shared<TcpChannel>("127.0.0.1", server_->port()));
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }

  BackendSuite local_;
  BackendSuite remote_;
  std::unique_ptr<BackendServer> server_;
  std::thread thread_;
};

TEST_F(RemoteTest, EveryOpMatchesLocal) {
  Sentence p("i like cats"), r("yes i have two cats"), h("do you have pets ?");
  auto a = local_.persona_nli->entail(r, p), b = remote_.persona_nli->entail(r, p);
  EXPECT_DOUBLE_EQ(a.entail_prob, b.entail_prob);
  EXPECT_EQ(a.label, b.label);
  EXPECT_DOUBLE_EQ(local_.coherence_nli->entail(h, r).entail_prob, remote_.coherence_nli->entail(h, r).entail_prob);
  EXPECT_DOUBLE_EQ(local_.fluency->perplexity(p.tokens()), remote_.fluency->perplexity(p.tokens()));
  EXPECT_DOUBLE_EQ(local_.similarity->similarity(p.tokens(), r.tokens()),
                   remote_.similarity->similarity(p.tokens(), r.tokens()));
  EXPECT_EQ(local_.infiller->infill(p.tokens(), {1, 2}, 5, 4), remote_.infiller->infill(p.tokens(), {1, 2}, 5, 4));
  EXPECT_EQ(local_.continuer->continue_prefix({"i"}, 2, 3, 4), remote_.continuer->continue_prefix({"i"}, 2, 3, 4));
  EXPECT_EQ(local_.translator->back_translate(h, 3, 1), remote_.translator->back_translate(h, 3, 1));
  EXPECT_EQ(local_.responder->respond(p, h, 2), remote_.responder->respond(p, h, 2));
  EXPECT_EQ(local_.pos_tagger->tag_all(r.tokens()), remote_.pos_tagger->tag_all(r.tokens()));
}

TEST_F(RemoteTest, ConcurrentCallsAreSerialized) {
  Sentence p("i like cats"), r("yes i have two cats");
  std::vector<std::thread> ts;
  std::atomic<int> bad{0};
  for (int i = 0; i < 8; ++i) {
    ts.emplace_back([&] {
      for (int k = 0; k < 20; ++k) {
        if (remote_.persona_nli->entail(r, p).entail_prob != 0.5) ++bad;
      }
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(bad.load(), 0);
}

TEST(Remote, HandleRequestErrors) {
  BackendSuite empty;
  auto reply = handle_request(Json{{"op", "nope"}, {"inputs", Json::object()}, {"seed", 0}}, empty);
  EXPECT_TRUE(reply.contains("error"));
  auto reply2 = handle_request(Json::array(), empty);
  EXPECT_TRUE(reply2.contains("error"));
}

TEST(Remote, CallRaisesOnErrorReply) {
  class Canned final : public LineChannel {
   public:
    explicit Canned(std::string reply) : reply_(std::move(reply)) {}
    std::string exchange(const std::string&) override { return reply_; }

   private:
    std::string reply_;
  };
  Canned err("{\"error\":\"model offline\"}");
  EXPECT_THROW(remote_call(err, "fluency.perplexity", Json{{"tokens", {"a"}}}), BackendError);
  Canned junk("not json");
  EXPECT_THROW(remote_call(junk, "fluency.perplexity", Json{{"tokens", {"a"}}}), BackendError);
  Canned ok("{\"outputs\":{\"perplexity\":3.5}}");
  EXPECT_DOUBLE_EQ(remote_call(ok, "fluency.perplexity", Json{{"tokens", {"a"}}})["perplexity"].get<double>(), 3.5);
}
