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

#include "d3/metrics/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "d3/common/error.hpp"

namespace d3::metrics {

namespace {

struct OrderStats {
  std::vector<double> matched;
  std::vector<double> total;
};

void accumulate_segment(const Tokens& cand, const std::vector<Tokens>& refs, std::size_t max_order,
                        OrderStats& stats) {
  for (std::size_t n = 1; n <= max_order; ++n) {
    std::map<std::string, std::size_t> max_ref;
    for (const auto& r : refs)
      for (auto& [g, c] : ngram_counts(r, n)) max_ref[g] = std::max(max_ref[g], c);
    for (auto& [g, c] : ngram_counts(cand, n)) {
      auto it = max_ref.find(g);
      stats.matched[n - 1] += static_cast<double>(std::min(c, it == max_ref.end() ? 0 : it->second));
      stats.total[n - 1] += static_cast<double>(c);
    }
  }
}

std::size_t closest_ref_length(std::size_t cand_len, const std::vector<Tokens>& refs) {
  std::size_t best = refs.front().size();
  for (const auto& r : refs) {
    const auto d = [&](std::size_t len) { return len > cand_len ? len - cand_len : cand_len - len; };
    if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best)) best = r.size();
  }
  return best;
}

double combine(const OrderStats& stats, double cand_len, double ref_len, const BleuOptions& opts) {
  if (cand_len == 0.0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < opts.max_order; ++n) {
    double precision = 0.0;
    if (stats.matched[n] > 0.0) {
      precision = stats.matched[n] / stats.total[n];
    } else if (opts.smoothing == Smoothing::epsilon) {
      precision = opts.epsilon / std::max(stats.total[n], 1.0);
    } else {
      return 0.0;
    }
    log_sum += std::log(precision) / static_cast<double>(opts.max_order);
  }
  const double bp = cand_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / cand_len);
  return bp * std::exp(log_sum);
}

void check(const BleuOptions& opts) {
  if (opts.max_order == 0) throw ValidationError("BLEU order must be >= 1");
}

}  // namespace

double sentence_bleu(const Tokens& candidate, const std::vector<Tokens>& references, const BleuOptions& opts) {
  check(opts);
  if (references.empty()) throw ValidationError("BLEU needs at least one reference");
  OrderStats stats{std::vector<double>(opts.max_order), std::vector<double>(opts.max_order)};
  accumulate_segment(candidate, references, opts.max_order, stats);
  return combine(stats, static_cast<double>(candidate.size()),
                 static_cast<double>(closest_ref_length(candidate.size(), references)), opts);
}

double corpus_bleu(const std::vector<Tokens>& candidates, const std::vector<std::vector<Tokens>>& references,
                   const BleuOptions& opts) {
  check(opts);
  if (candidates.size() != references.size()) throw ValidationError("BLEU: one reference set per candidate");
  OrderStats stats{std::vector<double>(opts.max_order), std::vector<double>(opts.max_order)};
  double cand_len = 0.0, ref_len = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (references[i].empty()) throw ValidationError("BLEU needs at least one reference per candidate");
    accumulate_segment(candidates[i], references[i], opts.max_order, stats);
    cand_len += static_cast<double>(candidates[i].size());
    ref_len += static_cast<double>(closest_ref_length(candidates[i].size(), references[i]));
  }
  return combine(stats, cand_len, ref_len, opts);
}

double corpus_nist(const std::vector<Tokens>& candidates, const std::vector<std::vector<Tokens>>& references,
                   std::size_t max_order) {
  if (candidates.size() != references.size()) throw ValidationError("NIST: one reference set per candidate");
  if (max_order == 0) throw ValidationError("NIST order must be >= 1");

  // Information weights from every reference sentence in the corpus.
  std::map<std::string, double> ref_counts;
  double ref_words = 0.0;
  for (const auto& refs : references) {
    for (const auto& r : refs) {
      ref_words += static_cast<double>(r.size());
      for (std::size_t n = 1; n <= max_order; ++n)
        for (auto& [g, c] : ngram_counts(r, n)) ref_counts[g] += static_cast<double>(c);
    }
  }
  auto info = [&](const std::string& g) {
    const auto cut = g.rfind('\x1f');
    const double parent = cut == std::string::npos ? ref_words : ref_counts.at(g.substr(0, cut));
    return std::log2(parent / ref_counts.at(g));
  };

  std::vector<double> gain(max_order, 0.0), hyp_total(max_order, 0.0);
  double sys_len = 0.0, ref_len = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& cand = candidates[i];
    const auto& refs = references[i];
    if (refs.empty()) throw ValidationError("NIST needs at least one reference per candidate");
    sys_len += static_cast<double>(cand.size());
    double len_sum = 0.0;
    for (const auto& r : refs) len_sum += static_cast<double>(r.size());
    ref_len += len_sum / static_cast<double>(refs.size());
    for (std::size_t n = 1; n <= max_order; ++n) {
      std::map<std::string, std::size_t> max_ref;
      for (const auto& r : refs)
        for (auto& [g, c] : ngram_counts(r, n)) max_ref[g] = std::max(max_ref[g], c);
      for (auto& [g, c] : ngram_counts(cand, n)) {
        hyp_total[n - 1] += static_cast<double>(c);
        auto it = max_ref.find(g);
        if (it != max_ref.end()) gain[n - 1] += info(g) * static_cast<double>(std::min(c, it->second));
      }
    }
  }

  double score = 0.0;
  for (std::size_t n = 0; n < max_order; ++n)
    if (hyp_total[n] > 0.0) score += gain[n] / hyp_total[n];

  const double ratio = ref_len > 0.0 ? sys_len / ref_len : 0.0;
  double bp = 1.0;
  if (ratio <= 0.0) {
    bp = 0.0;
  } else if (ratio < 1.0) {
    const double beta = std::log(0.5) / std::pow(std::log(1.5), 2.0);
    bp = std::exp(beta * std::pow(std::log(ratio), 2.0));
  }
  return score * bp;
}

double nist_4(const Tokens& candidate, const std::vector<Tokens>& references) {
  return corpus_nist({candidate}, {references}, 4);
}

}  // namespace d3::metrics
