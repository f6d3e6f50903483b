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

#include <benchmark/benchmark.h>

#include "d3/common/rng.hpp"
#include "d3/corpus/tokenizer.hpp"
#include "d3/distill/distill.hpp"
#include "d3/diversify/diversify.hpp"
#include "d3/gateway/registry.hpp"
#include "d3/metrics/bleu.hpp"
#include "d3/metrics/diversity.hpp"

using namespace d3;

namespace {

const std::vector<std::string> kWords = {"i",     "like", "cats",  "dogs", "my",   "favorite", "food", "is",
                                         "pizza", "work", "as",    "a",    "nurse", "play",    "the",  "guitar",
                                         "and",   "love", "hiking", "with", "friends", "on",   "weekends"};

std::string random_line(Rng& rng, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += (i ? " " : "") + kWords[rng.below(kWords.size())];
  return s;
}

std::vector<corpus::DialogueSample> make_samples(std::size_t n) {
  Rng rng(42);
  std::vector<corpus::DialogueSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    corpus::DialogueSample s;
    for (int k = 0; k < 4; ++k) s.persona.emplace_back(random_line(rng, 5));
    s.history = {corpus::Utterance(random_line(rng, 8))};
    s.response = corpus::Utterance(random_line(rng, 10));
    s.dialogue_id = "b" + std::to_string(i);
    out.push_back(s);
  }
  return out;
}

gateway::BackendSuite suite_for(const std::vector<corpus::DialogueSample>& samples) {
  std::vector<corpus::Sentence> fit;
  for (const auto& s : samples)
    for (const auto& p : s.persona) fit.push_back(p);
  return gateway::make_suite(gateway::BackendSpec{}, fit);
}

void BM_Tokenize(benchmark::State& state) {
  Rng rng(1);
  const std::string line = random_line(rng, 40) + ", isn't it? yes!";
  for (auto _ : state) benchmark::DoNotOptimize(corpus::tokenize(line));
}
BENCHMARK(BM_Tokenize);

void BM_Distill(benchmark::State& state) {
  auto samples = make_samples(static_cast<std::size_t>(state.range(0)));
  auto suite = suite_for(samples);
  for (auto _ : state) benchmark::DoNotOptimize(distill::distill_dataset(samples, *suite.persona_nli, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Distill)->Arg(100)->Arg(1000);

void BM_Diversify(benchmark::State& state) {
  auto samples = make_samples(50);
  auto suite = suite_for(samples);
  auto distilled = distill::distill_dataset(samples, *suite.persona_nli, 0.3);
  const auto jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(diversify::diversify_dataset(distilled, diversify::DiversifyConfig{}, suite, 7, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(distilled.size()));
}
BENCHMARK(BM_Diversify)->Arg(1)->Arg(4)->UseRealTime();

void BM_CorpusBleu(benchmark::State& state) {
  Rng rng(3);
  std::vector<corpus::Tokens> cands;
  std::vector<std::vector<corpus::Tokens>> refs;
  for (int i = 0; i < 500; ++i) {
    cands.push_back(corpus::tokenize(random_line(rng, 12)));
    refs.push_back({corpus::tokenize(random_line(rng, 12))});
  }
  for (auto _ : state) benchmark::DoNotOptimize(metrics::corpus_bleu(cands, refs));
}
BENCHMARK(BM_CorpusBleu);

void BM_DistinctEntropy(benchmark::State& state) {
  Rng rng(4);
  std::vector<corpus::Tokens> corpus;
  for (int i = 0; i < 2000; ++i) corpus.push_back(corpus::tokenize(random_line(rng, 12)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::distinct_n(corpus, 2));
    benchmark::DoNotOptimize(metrics::entropy_n(corpus, 2));
  }
}
BENCHMARK(BM_DistinctEntropy);

}  // namespace
BENCHMARK_MAIN();
