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

#include "d3/pipeline/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "d3/common/digest.hpp"
#include "d3/common/error.hpp"
#include "d3/curriculum/plan.hpp"
#include "d3/pipeline/toml.hpp"

namespace d3::pipeline {

namespace {

using Json = nlohmann::ordered_json;
using diversify::ThresholdMode;

const char* to_string(ThresholdMode m) {
  switch (m) {
    case ThresholdMode::absolute: return "absolute";
    case ThresholdMode::size_matched: return "size_matched";
    case ThresholdMode::none: return "none";
  }
  return "unknown";
}

ThresholdMode parse_threshold_mode(const std::string& s, const std::string& key) {
  for (auto m : {ThresholdMode::absolute, ThresholdMode::size_matched, ThresholdMode::none}) {
    if (s == to_string(m)) return m;
  }
  throw ValidationError("expected absolute, size_matched or none, got '" + s + "'", key);
}

double get_real(const Json& v, const std::string& key) {
  if (!v.is_number() || v.is_boolean()) throw ValidationError("expected a number", key);
  return v.get<double>();
}

std::size_t get_count(const Json& v, const std::string& key) {
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d != static_cast<double>(static_cast<long long>(d))) throw ValidationError("expected an integer", key);
    if (d < 0) throw ValidationError("must be >= 0", key);
    return static_cast<std::size_t>(d);
  }
  if (!v.is_number_integer()) throw ValidationError("expected an integer", key);
  if (v.get<long long>() < 0) throw ValidationError("must be >= 0", key);
  return v.get<std::size_t>();
}

std::string get_string(const Json& v, const std::string& key) {
  if (!v.is_string()) throw ValidationError("expected a string", key);
  return v.get<std::string>();
}

using Setter = std::function<void(const Json&, const std::string&)>;

void apply_table(const Json& table, const std::string& name, const std::map<std::string, Setter>& setters) {
  if (!table.is_object()) throw ValidationError("expected a table", name);
  for (const auto& [k, v] : table.items()) {
    const std::string key = name + "." + k;
    auto it = setters.find(k);
    if (it == setters.end()) throw ValidationError("unknown key", key);
    it->second(v, key);
  }
}

void check_unit(double v, const std::string& key, bool open_low = false) {
  if (!(open_low ? v > 0.0 : v >= 0.0) || v > 1.0) {
    throw ValidationError(std::string("must lie in ") + (open_low ? "(0, 1]" : "[0, 1]"), key);
  }
}

}  // namespace

bool operator==(const Config& a, const Config& b) {
  return config_to_json(a) == config_to_json(b);
}

void validate(const Config& c) {
  check_unit(c.tau, "distill.tau", true);
  const auto& d = c.diversify;
  check_unit(d.alpha, "diversify.alpha");
  check_unit(d.beta, "diversify.beta");
  check_unit(d.gamma, "diversify.gamma");
  if (d.beta + d.gamma > 1.0 + 1e-12) throw ValidationError("beta + gamma must not exceed 1", "diversify.gamma");
  check_unit(d.mask_ratio, "diversify.mask_ratio", true);
  check_unit(d.phrase_ratio_lo, "diversify.phrase_ratio", true);
  check_unit(d.phrase_ratio_hi, "diversify.phrase_ratio", true);
  if (d.phrase_ratio_lo > d.phrase_ratio_hi) throw ValidationError("lower bound exceeds upper bound", "diversify.phrase_ratio");
  if (d.phrase_ratio_hi >= 1.0) throw ValidationError("upper bound must be below 1", "diversify.phrase_ratio");
  check_unit(d.continuation_ratio, "diversify.continuation_ratio", true);
  if (d.k_candidates == 0) throw ValidationError("must be >= 1", "diversify.k_candidates");
  if (d.n_personas == 0) throw ValidationError("must be >= 1", "diversify.n_personas");
  if (d.beam == 0) throw ValidationError("must be >= 1", "diversify.beam");
  if (d.size_ratio < 0.0) throw ValidationError("must be >= 0", "diversify.size_ratio");
  if (d.n_history > d.beam * d.beam) throw ValidationError("exceeds beam * beam back-translations", "diversify.n_history");

  try {
    curriculum::parse_variant(c.curriculum.variant);
  } catch (const ValidationError&) {
    throw ValidationError("unknown variant '" + c.curriculum.variant + "'", "curriculum.variant");
  }
  if (c.curriculum.trainer != "unigram-lm") {
    throw ValidationError("unknown trainer '" + c.curriculum.trainer + "' (expected unigram-lm)", "curriculum.trainer");
  }
  if (c.curriculum.patience_easy == 0) throw ValidationError("must be >= 1", "curriculum.patience_easy");
  if (c.curriculum.patience_hard == 0) throw ValidationError("must be >= 1", "curriculum.patience_hard");
  if (c.curriculum.max_epochs == 0) throw ValidationError("must be >= 1", "curriculum.max_epochs");

  check_unit(c.backends.persona_nli_threshold, "backends.persona_nli_threshold");
  check_unit(c.backends.coherence_nli_threshold, "backends.coherence_nli_threshold");
  if (!(c.backends.ppl_normalizer > 0.0)) throw ValidationError("must be > 0", "backends.ppl_normalizer");
}

Config config_from_json(const Json& root) {
  if (!root.is_object()) throw ValidationError("config root must be a table");
  Config c;
  auto& d = c.diversify;
  auto& b = c.backends;
  auto real = [](double& target) { return [&target](const Json& v, const std::string& k) { target = get_real(v, k); }; };
  auto count = [](std::size_t& target) {
    return [&target](const Json& v, const std::string& k) { target = get_count(v, k); };
  };
  auto str = [](std::string& target) {
    return [&target](const Json& v, const std::string& k) { target = get_string(v, k); };
  };

  const std::map<std::string, std::map<std::string, Setter>> tables = {
      {"io", {{"input", str(c.io.input)}, {"output_dir", str(c.io.output_dir)}, {"dev", str(c.io.dev)},
              {"dev_easy", str(c.io.dev_easy)}}},
      {"distill", {{"tau", real(c.tau)}}},
      {"diversify",
       {{"alpha", real(d.alpha)},
        {"beta", real(d.beta)},
        {"gamma", real(d.gamma)},
        {"mask_ratio", real(d.mask_ratio)},
        {"phrase_ratio",
         [&d](const Json& v, const std::string& k) {
           if (!v.is_array() || v.size() != 2) throw ValidationError("expected [low, high]", k);
           d.phrase_ratio_lo = get_real(v[0], k);
           d.phrase_ratio_hi = get_real(v[1], k);
         }},
        {"continuation_ratio", real(d.continuation_ratio)},
        {"k_candidates", count(d.k_candidates)},
        {"n_personas", count(d.n_personas)},
        {"n_history", count(d.n_history)},
        {"beam", count(d.beam)},
        {"threshold_mode",
         [&d](const Json& v, const std::string& k) { d.threshold_mode = parse_threshold_mode(get_string(v, k), k); }},
        {"threshold", real(d.threshold)},
        {"size_ratio", real(d.size_ratio)}}},
      {"curriculum",
       {{"variant", str(c.curriculum.variant)},
        {"trainer", str(c.curriculum.trainer)},
        {"patience_easy", count(c.curriculum.patience_easy)},
        {"patience_hard", count(c.curriculum.patience_hard)},
        {"max_epochs", count(c.curriculum.max_epochs)}}},
      {"backends",
       {{"persona_nli", str(b.persona_nli)},
        {"coherence_nli", str(b.coherence_nli)},
        {"fluency", str(b.fluency)},
        {"similarity", str(b.similarity)},
        {"infiller", str(b.infiller)},
        {"continuer", str(b.continuer)},
        {"translator", str(b.translator)},
        {"responder", str(b.responder)},
        {"pos_tagger", str(b.pos_tagger)},
        {"persona_nli_threshold", real(b.persona_nli_threshold)},
        {"coherence_nli_threshold", real(b.coherence_nli_threshold)},
        {"ppl_normalizer", real(b.ppl_normalizer)}}},
  };

  for (const auto& [name, table] : root.items()) {
    auto it = tables.find(name);
    if (it == tables.end()) throw ValidationError(table.is_object() ? "unknown table" : "unknown key", name);
    apply_table(table, name, it->second);
  }
  validate(c);
  return c;
}

Json config_to_json(const Config& c) {
  const auto& d = c.diversify;
  const auto& b = c.backends;
  return {
      {"io", {{"input", c.io.input}, {"output_dir", c.io.output_dir}, {"dev", c.io.dev}, {"dev_easy", c.io.dev_easy}}},
      {"distill", {{"tau", c.tau}}},
      {"diversify",
       {{"alpha", d.alpha},
        {"beta", d.beta},
        {"gamma", d.gamma},
        {"mask_ratio", d.mask_ratio},
        {"phrase_ratio", {d.phrase_ratio_lo, d.phrase_ratio_hi}},
        {"continuation_ratio", d.continuation_ratio},
        {"k_candidates", d.k_candidates},
        {"n_personas", d.n_personas},
        {"n_history", d.n_history},
        {"beam", d.beam},
        {"threshold_mode", to_string(d.threshold_mode)},
        {"threshold", d.threshold},
        {"size_ratio", d.size_ratio}}},
      {"curriculum",
       {{"variant", c.curriculum.variant},
        {"trainer", c.curriculum.trainer},
        {"patience_easy", c.curriculum.patience_easy},
        {"patience_hard", c.curriculum.patience_hard},
        {"max_epochs", c.curriculum.max_epochs}}},
      {"backends",
       {{"persona_nli", b.persona_nli},
        {"coherence_nli", b.coherence_nli},
        {"fluency", b.fluency},
        {"similarity", b.similarity},
        {"infiller", b.infiller},
        {"continuer", b.continuer},
        {"translator", b.translator},
        {"responder", b.responder},
        {"pos_tagger", b.pos_tagger},
        {"persona_nli_threshold", b.persona_nli_threshold},
        {"coherence_nli_threshold", b.coherence_nli_threshold},
        {"ppl_normalizer", b.ppl_normalizer}}},
  };
}

Config parse_config(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    Json root;
    try {
      root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON config: ") + e.what(), 0);
    }
    return config_from_json(root);
  }
  return config_from_json(parse_toml(text));
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const Config& config) { return dump_toml(config_to_json(config)); }

std::string config_digest(const Config& config) { return sha256_hex(dump_config(config)); }

}  // namespace d3::pipeline
