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

#include "d3/gateway/registry.hpp"

#include <map>
#include <optional>

#include "d3/common/error.hpp"
#include "d3/gateway/reference.hpp"
#include "d3/gateway/remote.hpp"

namespace d3::gateway {

namespace {

constexpr std::string_view kRemotePrefix = "remote:";

struct Endpoint {
  std::string host;
  std::uint16_t port;
};

std::optional<Endpoint> parse_remote(const std::string& name, const std::string& role) {
  if (name.rfind(kRemotePrefix, 0) != 0) return std::nullopt;
  const std::string rest = name.substr(kRemotePrefix.size());
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size())
    throw ValidationError("remote backend must be remote:HOST:PORT, got '" + name + "'", "backends." + role);
  int port = 0;
  try {
    port = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    port = -1;
  }
  if (port <= 0 || port > 65535) throw ValidationError("invalid port in '" + name + "'", "backends." + role);
  return Endpoint{rest.substr(0, colon), static_cast<std::uint16_t>(port)};
}

class ChannelPool {
 public:
  std::shared_ptr<LineChannel> get(const Endpoint& ep) {
    auto key = ep.host + ":" + std::to_string(ep.port);
    auto& slot = channels_[key];
    if (!slot) slot = std::make_shared<TcpChannel>(ep.host, ep.port);
    return slot;
  }

 private:
  std::map<std::string, std::shared_ptr<LineChannel>> channels_;
};

[[noreturn]] void unknown(const std::string& role, const std::string& name) {
  throw ValidationError("unknown backend '" + name + "'", "backends." + role);
}

}  // namespace

BackendSuite make_suite(const BackendSpec& spec, const std::vector<Sentence>& fit_sentences) {
  ChannelPool pool;
  std::vector<Tokens> fit;
  fit.reserve(fit_sentences.size());
  for (const auto& s : fit_sentences) fit.push_back(s.tokens());

  BackendSuite suite;
  // Remote members come from a per-endpoint remote suite.
  auto remote = [&](const std::string& name, const std::string& role) -> std::optional<BackendSuite> {
    if (auto ep = parse_remote(name, role)) return make_remote_suite(pool.get(*ep), spec.ppl_normalizer);
    return std::nullopt;
  };

  if (auto r = remote(spec.pos_tagger, "pos_tagger")) suite.pos_tagger = r->pos_tagger;
  else if (spec.pos_tagger == "rules") suite.pos_tagger = std::make_shared<RulePosTagger>();
  else unknown("pos_tagger", spec.pos_tagger);

  auto nli = [&](const std::string& name, const std::string& role, double threshold,
                 std::shared_ptr<const EntailmentScorer> BackendSuite::*member) {
    if (auto r = remote(name, role)) suite.*member = (*r).*member;
    else if (name == "overlap") suite.*member = std::make_shared<OverlapEntailment>(suite.pos_tagger, threshold);
    else unknown(role, name);
  };
  nli(spec.persona_nli, "persona_nli", spec.persona_nli_threshold, &BackendSuite::persona_nli);
  nli(spec.coherence_nli, "coherence_nli", spec.coherence_nli_threshold, &BackendSuite::coherence_nli);

  if (auto r = remote(spec.fluency, "fluency")) suite.fluency = r->fluency;
  else if (spec.fluency == "char-ngram")
    suite.fluency = std::make_shared<CharNgramFluency>(fit, 3, 0.1, spec.ppl_normalizer);
  else unknown("fluency", spec.fluency);

  if (auto r = remote(spec.similarity, "similarity")) suite.similarity = r->similarity;
  else if (spec.similarity == "jaccard") suite.similarity = std::make_shared<JaccardSimilarity>();
  else unknown("similarity", spec.similarity);

  if (auto r = remote(spec.infiller, "infiller")) suite.infiller = r->infiller;
  else if (spec.infiller == "cooccurrence")
    suite.infiller = std::make_shared<TableInfiller>(TableInfiller::from_corpus(fit, *suite.pos_tagger));
  else unknown("infiller", spec.infiller);

  if (auto r = remote(spec.continuer, "continuer")) suite.continuer = r->continuer;
  else if (spec.continuer == "ngram") suite.continuer = std::make_shared<NgramContinuer>(NgramContinuer::from_corpus(fit));
  else unknown("continuer", spec.continuer);

  if (auto r = remote(spec.translator, "translator")) suite.translator = r->translator;
  else if (spec.translator == "word-dropout") suite.translator = std::make_shared<WordDropoutTranslator>();
  else if (spec.translator == "word-swap") suite.translator = std::make_shared<WordSwapTranslator>();
  else if (spec.translator == "identity") suite.translator = std::make_shared<IdentityTranslator>();
  else unknown("translator", spec.translator);

  if (auto r = remote(spec.responder, "responder")) suite.responder = r->responder;
  else if (spec.responder == "template") suite.responder = std::make_shared<TemplateResponder>();
  else unknown("responder", spec.responder);

  return suite;
}

std::shared_ptr<const EntailmentScorer> make_entailment(const std::string& name, double threshold) {
  if (name == "overlap") return std::make_shared<OverlapEntailment>(std::make_shared<RulePosTagger>(), threshold);
  if (auto ep = parse_remote(name, "nli"))
    return make_remote_suite(std::make_shared<TcpChannel>(ep->host, ep->port)).persona_nli;
  unknown("nli", name);
}

std::vector<std::pair<std::string, std::string>> describe(const BackendSuite& s) {
  auto n = [](const auto& p) { return p ? p->name() : std::string("none"); };
  return {{"persona_nli", n(s.persona_nli)}, {"coherence_nli", n(s.coherence_nli)}, {"fluency", n(s.fluency)},
          {"similarity", n(s.similarity)},   {"infiller", n(s.infiller)},           {"continuer", n(s.continuer)},
          {"translator", n(s.translator)},   {"responder", n(s.responder)},         {"pos_tagger", n(s.pos_tagger)}};
}

}  // namespace d3::gateway
