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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d3/common/digest.hpp"
#include "d3/common/error.hpp"
#include "d3/common/rng.hpp"
#include "d3/corpus/jsonl.hpp"
#include "d3/corpus/stats.hpp"
#include "d3/corpus/tokenizer.hpp"
#include "d3/curriculum/plan.hpp"
#include "d3/curriculum/runner.hpp"
#include "d3/curriculum/trainer.hpp"
#include "d3/distill/distill.hpp"
#include "d3/diversify/diversify.hpp"
#include "d3/gateway/registry.hpp"
#include "d3/gateway/remote.hpp"
#include "d3/metrics/report.hpp"
#include "d3/pipeline/config.hpp"
#include "d3/pipeline/run.hpp"

namespace {

using namespace d3;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  std::string config_path;
  std::size_t jobs = 1;
};

pipeline::Config load_effective_config(const Globals& g) {
  if (g.config_path.empty()) return pipeline::Config{};
  try {
    return pipeline::load_config(g.config_path);
  } catch (const ParseError& e) {
    throw ValidationError(std::string("config syntax: ") + e.what(), "config");
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json stats_json(const corpus::DatasetStats& s) {
  return {{"samples", s.n_samples}, {"unique_personas", s.n_unique_personas}, {"unique_tokens", s.n_unique_tokens}};
}

std::vector<corpus::Sentence> persona_sentences(const std::vector<corpus::DialogueSample>& samples) {
  std::vector<corpus::Sentence> out;
  std::set<std::string> seen;
  for (const auto& s : samples) {
    for (const auto& p : s.persona) {
      if (seen.insert(p.text()).second) out.push_back(p);
    }
  }
  return out;
}

// Rows are sample objects (the "response" field is used) or bare strings.
std::vector<corpus::Utterance> read_responses(const std::string& path) {
  std::vector<corpus::Utterance> out;
  for (const auto& row : corpus::read_jsonl_file(path)) {
    if (row.is_string()) {
      out.emplace_back(row.get<std::string>());
    } else if (row.is_object() && row.contains("response") && row["response"].is_string()) {
      out.emplace_back(row["response"].get<std::string>());
    } else {
      throw ValidationError("row has no string 'response'", path);
    }
  }
  return out;
}

std::vector<std::vector<corpus::PersonaSentence>> read_personas(const std::string& path) {
  std::vector<std::vector<corpus::PersonaSentence>> out;
  for (const auto& row : corpus::read_jsonl_file(path)) {
    if (!row.is_object() || !row.contains("persona")) throw ValidationError("row has no 'persona'", path);
    std::vector<corpus::PersonaSentence> ps;
    const auto& p = row["persona"];
    if (p.is_string()) {
      ps.emplace_back(p.get<std::string>());
    } else if (p.is_array()) {
      for (const auto& s : p) ps.emplace_back(s.get<std::string>());
    } else {
      throw ValidationError("'persona' must be a string or list", path);
    }
    out.push_back(std::move(ps));
  }
  return out;
}

std::vector<corpus::Tokens> token_lists(const std::vector<corpus::Utterance>& xs) {
  std::vector<corpus::Tokens> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x.tokens());
  return out;
}

// --- subcommands -----------------------------------------------------------

struct DistillArgs {
  std::string in, out = "-", nli;
  std::optional<double> tau;
};

int run_distill(const Globals& g, const DistillArgs& a) {
  auto config = load_effective_config(g);
  if (a.tau) config.tau = *a.tau;
  if (!a.nli.empty()) config.backends.persona_nli = a.nli;
  pipeline::validate(config);
  const auto samples = corpus::load_corpus(a.in);
  auto suite = gateway::make_suite(config.backends, persona_sentences(samples));
  auto distilled = distill::distill_dataset(samples, *suite.persona_nli, config.tau, g.jobs);
  std::vector<Json> rows;
  for (const auto& d : distilled) rows.push_back(corpus::to_json(d));
  write_text(a.out, corpus::to_jsonl(rows));
  std::cerr << "distilled " << samples.size() << " samples into " << distilled.size() << " (tau " << config.tau
            << ")\n";
  return 0;
}

struct DiversifyArgs {
  std::string in, out = "-", fit, composition, scored, skipped;
};

int run_diversify(const Globals& g, const DiversifyArgs& a) {
  const auto config = load_effective_config(g);
  const auto distilled = corpus::read_distilled_samples(a.in);
  std::vector<corpus::Sentence> fit;
  if (!a.fit.empty()) {
    fit = persona_sentences(corpus::load_corpus(a.fit));
  } else {
    std::set<std::string> seen;
    for (const auto& d : distilled) {
      if (seen.insert(d.persona.text()).second) fit.push_back(d.persona);
    }
  }
  auto suite = gateway::make_suite(config.backends, fit);
  auto result = diversify::diversify_dataset(distilled, config.diversify, suite, g.seed, g.jobs);

  std::vector<Json> rows;
  for (const auto& s : result.samples) rows.push_back(diversify::to_json(s));
  write_text(a.out, corpus::to_jsonl(rows));
  if (!a.scored.empty()) {
    std::vector<Json> all;
    for (const auto& s : result.scored) all.push_back(diversify::to_json(s));
    write_text(a.scored, corpus::to_jsonl(all));
  }
  if (!a.skipped.empty()) {
    std::vector<Json> skips;
    for (const auto& s : result.skipped) {
      skips.push_back({{"source_id", corpus::to_json(s.source_id)}, {"persona", s.persona}, {"reason", s.reason}});
    }
    write_text(a.skipped, corpus::to_jsonl(skips));
  }
  Json comp = result.composition.to_json();
  comp["effective_threshold"] = result.threshold;
  std::string comp_path = a.composition;
  if (comp_path.empty() && a.out != "-") comp_path = fs::path(a.out).replace_extension(".composition.json").string();
  if (!comp_path.empty()) {
    write_json(comp_path, comp);
  } else {
    std::cerr << comp.dump(2) << "\n";
  }
  std::cerr << "diversified " << distilled.size() << " distilled samples into " << result.samples.size() << " (of "
            << result.scored.size() << " candidates, " << result.skipped.size() << " skips)\n";
  return 0;
}

struct CurriculumArgs {
  std::string variant, orig, aug, dev, dev_easy, trainer, out = "-";
  std::optional<std::size_t> patience_easy, patience_hard, max_epochs;
};

curriculum::DatasetRef dataset(const std::string& name, const std::string& path) {
  return std::make_shared<curriculum::Dataset>(curriculum::Dataset{name, corpus::load_corpus(path)});
}

int run_curriculum(const Globals& g, const CurriculumArgs& a) {
  auto config = load_effective_config(g);
  auto& c = config.curriculum;
  if (!a.variant.empty()) c.variant = a.variant;
  if (!a.trainer.empty()) c.trainer = a.trainer;
  if (a.patience_easy) c.patience_easy = *a.patience_easy;
  if (a.patience_hard) c.patience_hard = *a.patience_hard;
  if (a.max_epochs) c.max_epochs = *a.max_epochs;
  pipeline::validate(config);
  const auto variant = curriculum::parse_variant(c.variant);

  curriculum::DatasetRef original = a.orig.empty() ? nullptr : dataset("original", a.orig);
  curriculum::DatasetRef augmented = a.aug.empty() ? nullptr : dataset("augmented", a.aug);
  curriculum::DatasetRef dev = a.dev.empty() ? original : dataset("dev", a.dev);
  curriculum::DatasetRef dev_easy = a.dev_easy.empty() ? augmented : dataset("dev_easy", a.dev_easy);

  auto plan = curriculum::build_plan(variant, original, augmented, dev, dev_easy, c.patience_easy, c.patience_hard,
                                     derive_seed(g.seed, "curriculum"));
  curriculum::UnigramTrainer trainer;
  auto result = curriculum::run_plan(plan, trainer, {c.max_epochs});
  Json j = {{"manifest", plan.manifest()}, {"trainer", trainer.name()}, {"max_epochs", c.max_epochs},
            {"training", result.to_json()}};
  write_json(a.out, j);
  if (!result.completed) {
    std::cerr << "training failed: " << result.error << "\n";
    return 1;
  }
  return 0;
}

struct EvaluateArgs {
  std::string hyp, ref, personas, nli, out = "-", attention, novelty_ref;
  bool novelty_per_sample = false;
};

int run_evaluate(const Globals& g, const EvaluateArgs& a) {
  auto config = load_effective_config(g);
  const auto hyps = read_responses(a.hyp);
  const auto refs = a.ref.empty() ? std::vector<corpus::Utterance>{} : read_responses(a.ref);
  const auto personas = a.personas.empty() ? std::vector<std::vector<corpus::PersonaSentence>>{}
                                           : read_personas(a.personas);
  std::shared_ptr<const gateway::EntailmentScorer> nli;
  if (!personas.empty()) {
    nli = gateway::make_entailment(a.nli.empty() ? config.backends.persona_nli : a.nli,
                                   config.backends.coherence_nli_threshold);
  }
  auto suite = gateway::make_suite(config.backends, {});
  auto report = metrics::evaluate_responses(hyps, refs, personas, nli.get(), suite.similarity.get());
  if (!a.novelty_ref.empty()) {
    metrics::add_novelty(report, token_lists(hyps), token_lists(read_responses(a.novelty_ref)),
                         a.novelty_per_sample);
  }
  if (!a.attention.empty()) {
    std::vector<metrics::AttentionRecord> records;
    for (const auto& row : corpus::read_jsonl_file(a.attention)) {
      records.push_back(metrics::attention_record_from_json(row, *suite.pos_tagger));
    }
    metrics::add_attention(report, records);
  }
  report.metadata["hypotheses"] = {{"name", fs::path(a.hyp).filename().string()}, {"sha256", sha256_file(a.hyp)}};
  if (!a.ref.empty()) {
    report.metadata["references"] = {{"name", fs::path(a.ref).filename().string()}, {"sha256", sha256_file(a.ref)}};
  }
  if (nli) report.metadata["nli"] = nli->name();
  report.metadata["similarity"] = suite.similarity->name();
  write_json(a.out, report.to_json());
  return 0;
}

int run_stats(const Globals& g, const std::vector<std::string>& inputs, const std::string& out) {
  Json j = Json::object();
  for (const auto& in : inputs) j[fs::path(in).filename().string()] = stats_json(corpus::compute_stats(corpus::load_corpus(in), g.jobs));
  write_json(out, j);
  return 0;
}

struct PipelineArgs {
  std::string in, out_dir;
  bool no_distill = false, no_diversify = false;
};

int run_pipeline_cmd(const Globals& g, const PipelineArgs& a) {
  auto config = load_effective_config(g);
  pipeline::RunOptions options;
  options.seed = g.seed;
  options.jobs = g.jobs;
  options.no_distill = a.no_distill;
  options.no_diversify = a.no_diversify;
  if (!g.config_path.empty()) options.base_dir = fs::path(g.config_path).parent_path();
  options.input = a.in;
  options.output_dir = a.out_dir;
  pipeline::validate(config);
  auto manifest = pipeline::run_pipeline(config, options);
  if (manifest["status"] != "completed") {
    std::cerr << "pipeline failed at stage " << manifest["failed_stage"].dump() << ": "
              << manifest.value("error", std::string()) << "\n";
    return 1;
  }
  std::cerr << "pipeline completed\n";
  return 0;
}

int run_serve(const Globals& g, const std::string& fit, std::uint16_t port) {
  auto config = load_effective_config(g);
  std::vector<corpus::Sentence> sentences;
  if (!fit.empty()) sentences = persona_sentences(corpus::load_corpus(fit));
  gateway::BackendServer server(gateway::make_suite(config.backends, sentences), port);
  std::cerr << "serving backends on port " << server.port() << "\n";
  server.run();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"d3: persona dialogue data distillation, diversification and curriculum tool"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--config", g.config_path, "Config file (TOML or JSON)")->check(CLI::ExistingFile);
  app.add_option("--jobs", g.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.fallthrough();

  DistillArgs da;
  auto* distill = app.add_subcommand("distill", "Reduce samples to entailed persona + last utterance");
  distill->add_option("--in", da.in, "Input corpus (.txt ConvAI2 or .jsonl)")->required()->check(CLI::ExistingFile);
  distill->add_option("--out", da.out, "Output JSONL ('-' for stdout)");
  distill->add_option("--nli", da.nli, "Persona NLI backend name");
  distill->add_option("--tau", da.tau, "Entailment threshold");

  DiversifyArgs va;
  auto* diversify = app.add_subcommand("diversify", "Edit personas, align responses, augment histories, filter");
  diversify->add_option("--in", va.in, "Distilled JSONL")->required()->check(CLI::ExistingFile);
  diversify->add_option("--out", va.out, "Kept samples JSONL");
  diversify->add_option("--fit", va.fit, "Corpus whose personas fit the reference backends")->check(CLI::ExistingFile);
  diversify->add_option("--composition", va.composition, "Composition report JSON");
  diversify->add_option("--scored", va.scored, "All scored candidates JSONL");
  diversify->add_option("--skipped", va.skipped, "Skipped units JSONL");

  CurriculumArgs ca;
  auto* curr = app.add_subcommand("curriculum", "Build a curriculum plan and train the toy trainer through it");
  curr->add_option("--variant", ca.variant, "d3, original, only_augment, shuffle or reverse");
  curr->add_option("--orig", ca.orig, "Original corpus D")->check(CLI::ExistingFile);
  curr->add_option("--aug", ca.aug, "Augmented corpus D^a")->check(CLI::ExistingFile);
  curr->add_option("--dev", ca.dev, "Hard-phase dev set (default: --orig)")->check(CLI::ExistingFile);
  curr->add_option("--dev-easy", ca.dev_easy, "Easy-phase dev set (default: --aug)")->check(CLI::ExistingFile);
  curr->add_option("--trainer", ca.trainer, "Trainer name (unigram-lm)");
  curr->add_option("--patience-easy", ca.patience_easy, "Easy-phase patience");
  curr->add_option("--patience-hard", ca.patience_hard, "Hard-phase patience");
  curr->add_option("--max-epochs", ca.max_epochs, "Per-phase epoch cap");
  curr->add_option("--out", ca.out, "Manifest and log JSON");

  EvaluateArgs ea;
  auto* eval = app.add_subcommand("evaluate", "Compute diversity, overlap, consistency and attention metrics");
  eval->add_option("--hyp", ea.hyp, "Hypothesis JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--ref", ea.ref, "Reference JSONL")->check(CLI::ExistingFile);
  eval->add_option("--personas", ea.personas, "JSONL with a persona field per hypothesis")->check(CLI::ExistingFile);
  eval->add_option("--nli", ea.nli, "NLI backend for C-score");
  eval->add_option("--attention", ea.attention, "AttentionRecord JSONL")->check(CLI::ExistingFile);
  eval->add_option("--novelty-ref", ea.novelty_ref, "Reference corpus for novelty")->check(CLI::ExistingFile);
  eval->add_flag("--novelty-per-sample", ea.novelty_per_sample, "Average novelty over aligned pairs");
  eval->add_option("--out", ea.out, "Report JSON");

  std::vector<std::string> stats_in;
  std::string stats_out = "-";
  auto* stats = app.add_subcommand("stats", "Sample, persona and token counts");
  stats->add_option("--in", stats_in, "Corpus files")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", stats_out, "Stats JSON");

  PipelineArgs pa;
  auto* pipe = app.add_subcommand("pipeline", "Run distill, diversify, union and curriculum planning");
  pipe->add_option("--in", pa.in, "Input corpus (overrides io.input)")->check(CLI::ExistingFile);
  pipe->add_option("--out-dir", pa.out_dir, "Output directory (overrides io.output_dir)");
  pipe->add_flag("--no-distill", pa.no_distill, "Easy curriculum from original-format samples");
  pipe->add_flag("--no-diversify", pa.no_diversify, "Easy curriculum from distilled samples only");

  std::string serve_fit;
  std::uint16_t serve_port = 0;
  auto* serve = app.add_subcommand("serve-backend", "Serve the configured backends over the line protocol");
  serve->add_option("--fit", serve_fit, "Corpus whose personas fit the reference backends")->check(CLI::ExistingFile);
  serve->add_option("--port", serve_port, "TCP port (0 picks one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    // A bad config is rejected whichever subcommand runs.
    if (!g.config_path.empty()) load_effective_config(g);
    if (*distill) return run_distill(g, da);
    if (*diversify) return run_diversify(g, va);
    if (*curr) return run_curriculum(g, ca);
    if (*eval) return run_evaluate(g, ea);
    if (*stats) return run_stats(g, stats_in, stats_out);
    if (*pipe) return run_pipeline_cmd(g, pa);
    if (*serve) return run_serve(g, serve_fit, serve_port);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
