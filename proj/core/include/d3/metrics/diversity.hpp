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

#include <cstddef>
#include <vector>

#include "d3/metrics/ngram.hpp"

namespace d3::metrics {

// Unique n-gram types over the corpus divided by total n-gram tokens; 0
// when the corpus has no n-grams. N-grams never span sentences.
double distinct_n(const std::vector<Tokens>& corpus, std::size_t n);

// Mean over sentences of the natural-log Shannon entropy of each sentence's
// n-gram distribution. Sentences shorter than n contribute 0 and are still
// counted; their number is written to `short_sentences` when given.
double entropy_n(const std::vector<Tokens>& corpus, std::size_t n, std::size_t* short_sentences = nullptr);

// |types(candidate) \ types(reference)| / |types(candidate)| over corpus-level
// n-gram type sets; 0 when the candidate has no n-grams.
double novelty_n(const std::vector<Tokens>& candidate, const std::vector<Tokens>& reference, std::size_t n);

// Per-sample variant: candidate[i] is compared against reference[i] only and
// the ratios are averaged. Both lists must have equal length.
double novelty_n_per_sample(const std::vector<Tokens>& candidate, const std::vector<Tokens>& reference,
                            std::size_t n);

}  // namespace d3::metrics
