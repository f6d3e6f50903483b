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
#include <fstream>
#include <set>
#include <sstream>

#include "d3/common/error.hpp"
#include "d3/common/rng.hpp"
#include "d3/corpus/convai2.hpp"
#include "d3/corpus/jsonl.hpp"
#include "d3/corpus/serialize.hpp"
#include "d3/corpus/stats.hpp"
#include "d3/corpus/tokenizer.hpp"
#include "test_support.hpp"

using namespace d3;
using namespace d3::corpus;

namespace {

std::vector<DialogueRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_convai2(in);
}

DialogueSample sample(std::vector<std::string> persona, std::vector<std::string> history, std::string response) {
  DialogueSample s;
  for (auto& p : persona) s.persona.emplace_back(p);
  for (auto& h : history) s.history.emplace_back(h);
  s.response = Utterance(response);
  return s;
}

}  // namespace

// --- tokenizer -------------------------------------------------------------

TEST(Tokenizer, GoldenCases) {
  EXPECT_EQ(tokenize("Hi there, how ARE you?"), (Tokens{"hi", "there", ",", "how", "are", "you", "?"}));
  EXPECT_EQ(tokenize("i like cats."), (Tokens{"i", "like", "cats", "."}));
  EXPECT_EQ(tokenize("  \"quoted\"  words\t"), (Tokens{"\"", "quoted", "\"", "words"}));
  EXPECT_EQ(tokenize("don't e-mail me!!"), (Tokens{"don't", "e-mail", "me", "!", "!"}));
  EXPECT_EQ(tokenize("..."), (Tokens{".", ".", "."}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(Tokenizer, Detokenize) {
  EXPECT_EQ(detokenize(Tokens{"hi", "there", ",", "how", "are", "you", "?"}), "hi there, how are you?");
  EXPECT_EQ(detokenize(Tokens{}), "");
}

TEST(Tokenizer, RoundTripProperty) {
  const std::vector<std::string> pieces = {"i", "like", "cats", ".", ",", "?", "don't", "a", "b", "!", "e-mail",
                                           "hello", "(", ")", "x1"};
  Rng rng(123);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    std::size_t n = rng.below(10);
    for (std::size_t i = 0; i < n; ++i) {
      text += pieces[rng.below(pieces.size())];
      text += rng.below(3) == 0 ? "" : " ";
    }
    Tokens t = tokenize(text);
    ASSERT_EQ(tokenize(detokenize(t)), t) << text;
  }
}

TEST(Tokenizer, Punctuation) {
  EXPECT_TRUE(is_punctuation("."));
  EXPECT_TRUE(is_punctuation("?!"));
  EXPECT_FALSE(is_punctuation("a."));
  EXPECT_FALSE(is_punctuation(""));
}

// --- ConvAI2 ---------------------------------------------------------------

TEST(ConvAI2, SingleDialogue) {
  auto recs = parse("1 your persona: i like cats.\n2 hi there\thello how are you");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].persona, std::vector<std::string>{"i like cats."});
  ASSERT_EQ(recs[0].turns.size(), 1u);
  EXPECT_EQ(recs[0].turns[0].partner, "hi there");
  EXPECT_EQ(recs[0].turns[0].self, "hello how are you");
}

TEST(ConvAI2, LineNumberResetStartsNewDialogue) {
  auto recs = parse(
      "1 your persona: i like cats.\n2 hi\thello\n"
      "1 your persona: i am tall.\n2 yo\they\n3 sup\tnothing\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].turns.size(), 1u);
  EXPECT_EQ(recs[1].turns.size(), 2u);
  EXPECT_NE(recs[0].dialogue_id, recs[1].dialogue_id);
}

TEST(ConvAI2, UtteranceLineWithoutTabIsError) {
  try {
    parse("1 your persona: i like cats.\n2 hi\thello\n3 hi there\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ConvAI2, MissingNumberIsError) {
  try {
    parse("your persona: i like cats.\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(ConvAI2, KeepsRewardAndCandidates) {
  auto recs = parse("1 your persona: a b.\n2 hi\thello\t\tno|yes|hello\n");
  ASSERT_EQ(recs[0].turns.size(), 1u);
  EXPECT_EQ(recs[0].turns[0].candidates, (std::vector<std::string>{"no", "yes", "hello"}));
}

TEST(ConvAI2, PartnerPersonaIsSeparate) {
  auto recs = parse("1 your persona: i like cats.\n2 partner's persona: i like dogs.\n3 hi\thello\n");
  EXPECT_EQ(recs[0].persona, std::vector<std::string>{"i like cats."});
  EXPECT_EQ(recs[0].partner_persona, std::vector<std::string>{"i like dogs."});
}

TEST(ConvAI2, EmitParseRoundTrip) {
  std::ifstream in(test::data_dir() / "fixture_convai2.txt");
  auto recs = parse_convai2(in);
  ASSERT_FALSE(recs.empty());
  std::ostringstream out;
  emit_convai2(recs, out);
  auto again = parse(out.str());
  EXPECT_EQ(recs, again);

  std::vector<DialogueRecord> synthetic(1);
  synthetic[0].dialogue_id = "0";
  synthetic[0].persona = {"i like cats.", "i am tall."};
  synthetic[0].partner_persona = {"i fish."};
  synthetic[0].turns = {{"hi", "hello", "", {}}, {"how are you ?", "fine", "1", {"a", "b"}}};
  std::ostringstream out2;
  emit_convai2(synthetic, out2);
  EXPECT_EQ(parse(out2.str()), synthetic);
}

// --- unrolling -------------------------------------------------------------

TEST(Unroll, TwoTurnPairs) {
  auto recs = parse("1 your persona: i like cats.\n2 hi\thello\n3 how are you\tfine thanks\n");
  auto samples = unroll_dialogues(recs);
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[0].history.size(), 1u);
  EXPECT_EQ(samples[0].history[0].text(), "hi");
  EXPECT_EQ(samples[0].response.text(), "hello");
  EXPECT_EQ(samples[0].turn_index, 0u);
  ASSERT_EQ(samples[1].history.size(), 3u);
  EXPECT_EQ(samples[1].history[0].text(), "hi");
  EXPECT_EQ(samples[1].history[1].text(), "hello");
  EXPECT_EQ(samples[1].history[2].text(), "how are you");
  EXPECT_EQ(samples[1].response.text(), "fine thanks");
  EXPECT_EQ(samples[1].turn_index, 1u);
  EXPECT_EQ(samples[1].persona.size(), 1u);
}

TEST(Unroll, SingleTurnAndEmpty) {
  auto samples = unroll_dialogues(parse("1 your persona: i like cats.\n2 hi\thello\n"));
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_EQ(samples[0].history.size(), 1u);
  EXPECT_TRUE(unroll_dialogues({}).empty());
}

TEST(Unroll, CountEqualsTurnPairs) {
  std::ifstream in(test::data_dir() / "fixture_convai2.txt");
  auto recs = parse_convai2(in);
  std::size_t pairs = 0;
  for (const auto& r : recs) pairs += r.turns.size();
  EXPECT_EQ(unroll_dialogues(recs).size(), pairs);
}

TEST(Unroll, ShapeWarnings) {
  std::vector<std::string> warnings;
  unroll_dialogues(parse("1 your persona: i like cats.\n2 hi\thello\n"), &warnings);
  EXPECT_FALSE(warnings.empty());  // one persona line is outside 4..6
}

// --- serialization ---------------------------------------------------------

TEST(Serialize, SingleTurnLayout) {
  auto s = sample({"i like cats"}, {"hi"}, "hello");
  auto in = serialize_input(s);
  EXPECT_EQ(in.tokens, (Tokens{"<bos>", "i", "like", "cats", "<talker1>", "hi"}));
  EXPECT_EQ(in.target_tokens, (Tokens{"<talker2>", "hello", "<eos>"}));
  EXPECT_EQ(in.segment_labels,
            (std::vector<Segment>{Segment::persona, Segment::persona, Segment::persona, Segment::persona,
                                  Segment::talker1, Segment::talker1}));
}

TEST(Serialize, DistilledSampleMatchesDialogueView) {
  DistilledSample d{PersonaSentence("i like cats"), Utterance("hi"), Utterance("hello"), {"x", 0, 0}};
  auto a = serialize_input(d);
  auto b = serialize_input(d.as_dialogue_sample());
  EXPECT_EQ(a.tokens, b.tokens);
  EXPECT_EQ(a.segment_labels, b.segment_labels);
  EXPECT_EQ(a.target_tokens, b.target_tokens);
}

TEST(Serialize, TalkersAlternateBackwards) {
  auto in = serialize_input(sample({"i like cats"}, {"hello", "do you have pets"}, "yes"));
  EXPECT_EQ(in.tokens, (Tokens{"<bos>", "i", "like", "cats", "<talker2>", "hello", "<talker1>", "do", "you", "have",
                               "pets"}));
  EXPECT_EQ(in.segment_labels[4], Segment::talker2);
  EXPECT_EQ(in.segment_labels[5], Segment::talker2);
  EXPECT_EQ(in.segment_labels[6], Segment::talker1);
  EXPECT_EQ(in.segment_labels.back(), Segment::talker1);
}

TEST(Serialize, LengthInvariant) {
  std::ifstream in(test::data_dir() / "fixture_convai2.txt");
  for (const auto& s : unroll_dialogues(parse_convai2(in))) {
    std::size_t expect = 1;
    for (const auto& p : s.persona) expect += p.size();
    for (const auto& h : s.history) expect += 1 + h.size();
    auto ser = serialize_input(s);
    ASSERT_EQ(ser.tokens.size(), expect);
    ASSERT_EQ(ser.segment_labels.size(), ser.tokens.size());
    ASSERT_EQ(ser.tokens.front(), "<bos>");
    ASSERT_EQ(ser.target_tokens.back(), "<eos>");
  }
}

TEST(Serialize, EmptyPersonaAndHistoryIsError) {
  DialogueSample s;
  s.response = Utterance("hi");
  EXPECT_THROW(serialize_input(s), Error);
}

TEST(Serialize, CustomSymbols) {
  SymbolTable t{"[B]", "[E]", "[P]", "[S]"};
  auto in = serialize_input(sample({"a"}, {"b"}, "c"), t);
  EXPECT_EQ(in.tokens, (Tokens{"[B]", "a", "[P]", "b"}));
  EXPECT_EQ(in.target_tokens, (Tokens{"[S]", "c", "[E]"}));
}

// --- stats -----------------------------------------------------------------

TEST(Stats, Empty) { EXPECT_EQ(compute_stats(std::vector<DialogueSample>{}), (DatasetStats{0, 0, 0})); }

TEST(Stats, PersonaCountedOnce) {
  std::vector<DialogueSample> v = {sample({"i like cats"}, {"hi"}, "yo"), sample({"i like cats"}, {"hey"}, "yo"),
                                   sample({"i like cats", "i like cats"}, {"hi"}, "ok")};
  auto s = compute_stats(v);
  EXPECT_EQ(s.n_samples, 3u);
  EXPECT_EQ(s.n_unique_personas, 1u);
  // i like cats hi yo hey ok
  EXPECT_EQ(s.n_unique_tokens, 7u);
}

TEST(Stats, NormalizedPersonaMatch) {
  std::vector<DialogueSample> v = {sample({"I like cats."}, {"hi"}, "yo"), sample({"i like cats ."}, {"hi"}, "yo")};
  EXPECT_EQ(compute_stats(v).n_unique_personas, 1u);
}

TEST(Stats, PermutationInvariantAndParallelConsistent) {
  std::ifstream in(test::data_dir() / "fixture_convai2.txt");
  auto samples = unroll_dialogues(parse_convai2(in));
  auto base = compute_stats(samples);
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    auto shuffled = samples;
    rng.shuffle(shuffled);
    EXPECT_EQ(compute_stats(shuffled, 1), base);
    EXPECT_EQ(compute_stats(shuffled, 4), base);
  }
}

TEST(Stats, SamplesAdditiveOverDisjointCorpora) {
  std::ifstream in(test::data_dir() / "fixture_convai2.txt");
  auto samples = unroll_dialogues(parse_convai2(in));
  std::vector<DialogueSample> a(samples.begin(), samples.begin() + 10), b(samples.begin() + 10, samples.end());
  EXPECT_EQ(compute_stats(a).n_samples + compute_stats(b).n_samples, compute_stats(samples).n_samples);
}

TEST(Stats, BruteForceOracle) {
  std::ifstream in(test::data_dir() / "fixture_convai2.txt");
  auto samples = unroll_dialogues(parse_convai2(in));
  std::set<std::string> personas, tokens;
  for (const auto& s : samples) {
    for (const auto& p : s.persona) {
      personas.insert(join(tokenize(p.text())));
      for (auto& t : tokenize(p.text())) tokens.insert(t);
    }
    for (const auto& h : s.history) {
      for (auto& t : tokenize(h.text())) tokens.insert(t);
    }
    for (auto& t : tokenize(s.response.text())) tokens.insert(t);
  }
  auto st = compute_stats(samples);
  EXPECT_EQ(st.n_unique_personas, personas.size());
  EXPECT_EQ(st.n_unique_tokens, tokens.size());
}

TEST(Stats, DistilledOverload) {
  std::vector<DistilledSample> d = {
      {PersonaSentence("i like cats"), Utterance("hi"), Utterance("yes cats"), {"a", 0, 0}},
      {PersonaSentence("i like cats"), Utterance("hey"), Utterance("no"), {"a", 1, 0}}};
  auto s = compute_stats(d);
  EXPECT_EQ(s.n_samples, 2u);
  EXPECT_EQ(s.n_unique_personas, 1u);
  EXPECT_EQ(s.n_unique_tokens, 7u);
}

// --- JSONL -----------------------------------------------------------------

TEST(Jsonl, DialogueSampleRoundTrip) {
  auto s = sample({"i like cats.", "i am tall."}, {"hi", "hello"}, "yes");
  s.dialogue_id = "d7";
  s.turn_index = 3;
  auto j = to_json(s);
  EXPECT_EQ(j["dialogue_id"], "d7");
  EXPECT_EQ(dialogue_sample_from_json(j), s);
}

TEST(Jsonl, DistilledRoundTrip) {
  DistilledSample d{PersonaSentence("i like cats"), Utterance("hi"), Utterance("yes cats"), {"d1", 2, 1}};
  EXPECT_EQ(distilled_sample_from_json(to_json(d)), d);
}

TEST(Jsonl, ReadReportsLine) {
  std::istringstream in("{\"a\":1}\n\n{broken\n");
  try {
    read_jsonl(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Jsonl, MissingFieldIsValidationError) {
  EXPECT_THROW(dialogue_sample_from_json(Json{{"persona", {"a"}}}), ValidationError);
}

TEST(Jsonl, WriteIsOneObjectPerLine) {
  std::vector<Json> rows = {Json{{"a", 1}}, Json{{"b", "x"}}};
  EXPECT_EQ(to_jsonl(rows), "{\"a\":1}\n{\"b\":\"x\"}\n");
}

TEST(Jsonl, LoadCorpusBothFormats) {
  auto txt = load_corpus(test::data_dir() / "fixture_convai2.txt");
  auto tmp = std::filesystem::temp_directory_path() / "d3_corpus_roundtrip.jsonl";
  std::vector<Json> rows;
  for (const auto& s : txt) rows.push_back(to_json(s));
  write_jsonl_file(tmp, rows);
  auto back = load_corpus(tmp);
  EXPECT_EQ(back, txt);
  std::filesystem::remove(tmp);
}
