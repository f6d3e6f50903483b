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

#include "d3/metrics/diversity.hpp"

#include <cmath>

#include "d3/common/error.hpp"

namespace d3::metrics {

namespace {

void check_order(std::size_t n) {
  if (n == 0) throw ValidationError("n-gram order must be >= 1", "n");
}

double novelty_ratio(const std::set<std::string>& cand, const std::set<std::string>& ref) {
  if (cand.empty()) return 0.0;
  std::size_t fresh = 0;
  for (const auto& g : cand) fresh += ref.count(g) ? 0 : 1;
  return static_cast<double>(fresh) / static_cast<double>(cand.size());
}

}  // namespace

double distinct_n(const std::vector<Tokens>& corpus, std::size_t n) {
  check_order(n);
  std::set<std::string> types;
  std::size_t total = 0;
  for (const auto& s : corpus) {
    for (auto& [g, c] : ngram_counts(s, n)) {
      types.insert(g);
      total += c;
    }
  }
  return total ? static_cast<double>(types.size()) / static_cast<double>(total) : 0.0;
}

double entropy_n(const std::vector<Tokens>& corpus, std::size_t n, std::size_t* short_sentences) {
  check_order(n);
  if (short_sentences) *short_sentences = 0;
  if (corpus.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : corpus) {
    const auto counts = ngram_counts(s, n);
    if (counts.empty()) {
      if (short_sentences) ++*short_sentences;
      continue;
    }
    const double total = static_cast<double>(s.size() - n + 1);
    double h = 0.0;
    for (const auto& [g, c] : counts) {
      const double p = static_cast<double>(c) / total;
      h -= p * std::log(p);
    }
    sum += h;
  }
  return sum / static_cast<double>(corpus.size());
}

double novelty_n(const std::vector<Tokens>& candidate, const std::vector<Tokens>& reference, std::size_t n) {
  check_order(n);
  return novelty_ratio(ngram_types(candidate, n), ngram_types(reference, n));
}

double novelty_n_per_sample(const std::vector<Tokens>& candidate, const std::vector<Tokens>& reference,
                            std::size_t n) {
  check_order(n);
  if (candidate.size() != reference.size())
    throw ValidationError("per-sample novelty needs aligned candidate and reference lists");
  if (candidate.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < candidate.size(); ++i)
    sum += novelty_ratio(ngram_types({candidate[i]}, n), ngram_types({reference[i]}, n));
  return sum / static_cast<double>(candidate.size());
}

}  // namespace d3::metrics
