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

enum class Smoothing {
  none,     // any zero n-gram precision makes the score 0
  epsilon,  // zero matched counts are replaced by epsilon
};

struct BleuOptions {
  std::size_t max_order = 4;
  Smoothing smoothing = Smoothing::epsilon;
  double epsilon = 1e-9;
};

// Sentence BLEU with clipped n-gram precision and brevity penalty against
// the closest reference length (ties go to the shorter reference).
double sentence_bleu(const Tokens& candidate, const std::vector<Tokens>& references, const BleuOptions& opts = {});

// Corpus BLEU: clipped counts and lengths are summed over segments before
// the geometric mean.
double corpus_bleu(const std::vector<Tokens>& candidates, const std::vector<std::vector<Tokens>>& references,
                   const BleuOptions& opts = {});

// NIST score with information weights estimated from all references. The
// brevity penalty uses the mean reference length per segment and drops to
// 0.5 at a length ratio of 2/3.
double corpus_nist(const std::vector<Tokens>& candidates, const std::vector<std::vector<Tokens>>& references,
                   std::size_t max_order = 4);

double nist_4(const Tokens& candidate, const std::vector<Tokens>& references);

}  // namespace d3::metrics
