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

#include <string>
#include <vector>

#include "d3/gateway/backends.hpp"

namespace d3::gateway {

// Backend name per role. Each accepts its reference implementation's name or
// "remote:HOST:PORT" to forward that role over the line protocol.
struct BackendSpec {
  std::string persona_nli = "overlap";
  std::string coherence_nli = "overlap";
  std::string fluency = "char-ngram";
  std::string similarity = "jaccard";
  std::string infiller = "cooccurrence";
  std::string continuer = "ngram";
  std::string translator = "word-dropout";
  std::string responder = "template";
  std::string pos_tagger = "rules";

  double persona_nli_threshold = 0.99;
  double coherence_nli_threshold = 0.5;
  double ppl_normalizer = 50.0;
};

// Builds the suite; reference members that need data are fitted on
// `fit_sentences` (the persona sentences of the loaded corpus). Unknown
// names raise ValidationError naming the role.
BackendSuite make_suite(const BackendSpec& spec, const std::vector<Sentence>& fit_sentences);

// A single entailment scorer by name, for the evaluation command.
std::shared_ptr<const EntailmentScorer> make_entailment(const std::string& name, double threshold);

// Names of the members, e.g. {"persona_nli": "overlap", ...}.
std::vector<std::pair<std::string, std::string>> describe(const BackendSuite& suite);

}  // namespace d3::gateway
