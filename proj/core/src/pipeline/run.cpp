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

#include "d3/pipeline/run.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "d3/common/digest.hpp"
#include "d3/common/error.hpp"
#include "d3/common/rng.hpp"
#include "d3/corpus/jsonl.hpp"
#include "d3/corpus/stats.hpp"
#include "d3/curriculum/plan.hpp"
#include "d3/distill/distill.hpp"

namespace d3::pipeline {

namespace {

using Json = nlohmann::ordered_json;
using corpus::DialogueSample;
using corpus::DistilledSample;
using diversify::DiversifiedSample;

Json stats_json(const corpus::DatasetStats& s) {
  return {{"samples", s.n_samples}, {"unique_personas", s.n_unique_personas}, {"unique_tokens", s.n_unique_tokens}};
}

std::vector<corpus::Sentence> fit_sentences(const std::vector<DialogueSample>& corpus) {
  std::vector<corpus::Sentence> out;
  std::set<std::string> seen;
  for (const auto& s : corpus) {
    for (const auto& p : s.persona) {
      if (seen.insert(p.text()).second) out.push_back(p);
    }
  }
  return out;
}

struct Augmented {
  std::vector<DistilledSample> distilled;
  diversify::DiversifyResult diversified;
  std::vector<DialogueSample> union_set;
};

// D^a for one corpus under the ablation flags.
Augmented augment(const std::vector<DialogueSample>& corpus, const Config& config, const RunOptions& options,
                  const gateway::BackendSuite& suite, std::uint64_t seed,
                  const std::function<void(const char*)>& on_stage = {}) {
  Augmented a;
  if (on_stage) on_stage("distill");
  a.distilled = distill::distill_dataset(corpus, *suite.persona_nli, config.tau, options.jobs);

  if (options.no_distill) {
    std::map<std::pair<std::string, std::size_t>, const DialogueSample*> by_id;
    for (const auto& s : corpus) by_id.emplace(std::make_pair(s.dialogue_id, s.turn_index), &s);
    for (const auto& d : a.distilled) {
      a.union_set.push_back(*by_id.at({d.source_id.dialogue_id, d.source_id.turn_index}));
    }
    return a;
  }
  for (const auto& d : a.distilled) a.union_set.push_back(d.as_dialogue_sample());
  if (options.no_diversify) return a;

  if (on_stage) on_stage("diversify");
  a.diversified = diversify::diversify_dataset(a.distilled, config.diversify, suite, seed, options.jobs);
  for (const auto& d : a.diversified.samples) a.union_set.push_back(d.as_dialogue_sample());
  return a;
}

template <typename T, typename F>
std::vector<Json> rows_of(const std::vector<T>& items, F&& f) {
  std::vector<Json> rows;
  rows.reserve(items.size());
  for (const auto& x : items) rows.push_back(f(x));
  return rows;
}

}  // namespace

Json run_pipeline(const Config& config, const RunOptions& options_in) {
  RunOptions options = options_in;
  if (options.no_distill) options.no_diversify = true;
  if (options.jobs == 0) options.jobs = 1;

  auto resolve = [&](const std::string& p) -> std::filesystem::path {
    std::filesystem::path path(p);
    return path.is_absolute() || options.base_dir.empty() ? path : options.base_dir / path;
  };
  const std::filesystem::path out_dir =
      options.output_dir.empty() ? resolve(config.io.output_dir) : options.output_dir;

  Json manifest;
  manifest["seed"] = options.seed;
  manifest["config_sha256"] = config_digest(config);
  manifest["ablation"] = {{"no_distill", options.no_distill}, {"no_diversify", options.no_diversify}};
  manifest["inputs"] = Json::object();
  manifest["backends"] = Json::object();
  manifest["stages"] = Json::array();
  manifest["status"] = "running";
  manifest["failed_stage"] = nullptr;
  Json files = Json::object();

  auto write_file = [&](const std::string& name, const std::string& bytes) {
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (out_dir / name).string());
    out << bytes;
    if (!out.flush()) throw Error("write failed for " + (out_dir / name).string());
    files[name] = sha256_hex(bytes);
  };
  auto write_json = [&](const std::string& name, const Json& j) { write_file(name, j.dump(2) + "\n"); };
  auto finish = [&]() {
    manifest["files"] = files;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << "\n";
    return manifest;
  };

  std::string current = "setup";
  auto begin = [&](const char* name) {
    current = name;
    manifest["stages"].push_back({{"name", name}, {"status", "running"}});
  };
  auto end = [&](const char* status = "completed", const std::string& note = {}) {
    manifest["stages"].back()["status"] = status;
    if (!note.empty()) manifest["stages"].back()["note"] = note;
  };

  try {
    std::filesystem::create_directories(out_dir);
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["failed_stage"] = "setup";
    manifest["error"] = e.what();
    return manifest;
  }

  try {
    begin("load");
    if (config.io.input.empty() && options.input.empty()) {
      throw ValidationError("no input corpus given", "io.input");
    }
    const auto input_path = options.input.empty() ? resolve(config.io.input) : options.input;
    std::vector<std::string> warnings;
    const auto corpus = corpus::load_corpus(input_path, &warnings);
    manifest["inputs"]["corpus"] = {{"name", input_path.filename().string()},
                                    {"sha256", sha256_file(input_path)},
                                    {"samples", corpus.size()},
                                    {"overridden", !options.input.empty()}};
    if (!warnings.empty()) manifest["inputs"]["warnings"] = warnings;
    write_file("config.toml", dump_config(config));
    end();

    begin("backends");
    const auto suite = gateway::make_suite(config.backends, fit_sentences(corpus));
    suite.require_complete();
    for (const auto& [role, name] : gateway::describe(suite)) manifest["backends"][role] = name;
    end();

    auto stage_hook = [&](const char* name) {
      if (manifest["stages"].back()["status"] == "running") end();
      begin(name);
    };
    Augmented a = augment(corpus, config, options, suite, derive_seed(options.seed, "pipeline/train"), stage_hook);
    end();

    begin("union");
    write_file("distilled.jsonl",
               corpus::to_jsonl(rows_of(a.distilled, [](const DistilledSample& d) { return corpus::to_json(d); })));
    write_file("diversified.jsonl", corpus::to_jsonl(rows_of(a.diversified.samples, [](const DiversifiedSample& d) {
                                      return diversify::to_json(d);
                                    })));
    write_file("scored.jsonl", corpus::to_jsonl(rows_of(a.diversified.scored, [](const DiversifiedSample& d) {
                                 return diversify::to_json(d);
                               })));
    write_file("skipped.jsonl", corpus::to_jsonl(rows_of(a.diversified.skipped, [](const diversify::SkipRecord& s) {
                                  return Json{{"source_id", corpus::to_json(s.source_id)},
                                              {"persona", s.persona},
                                              {"reason", s.reason}};
                                })));
    write_file("augmented.jsonl",
               corpus::to_jsonl(rows_of(a.union_set, [](const DialogueSample& d) { return corpus::to_json(d); })));

    Json stats = {
        {"original", stats_json(corpus::compute_stats(corpus, options.jobs))},
        {"distilled", stats_json(corpus::compute_stats(a.distilled, options.jobs))},
        {"diversified", stats_json(diversify::compute_stats(a.diversified.samples))},
        {"augmented", stats_json(corpus::compute_stats(a.union_set, options.jobs))},
    };
    write_json("stats.json", stats);
    Json composition = a.diversified.composition.to_json();
    composition["threshold_mode"] = config_to_json(config)["diversify"]["threshold_mode"];
    composition["effective_threshold"] = a.diversified.threshold;
    write_json("composition.json", composition);
    end();

    begin("curriculum");
    auto original = std::make_shared<curriculum::Dataset>(curriculum::Dataset{"original", corpus});
    auto augmented = std::make_shared<curriculum::Dataset>(curriculum::Dataset{"augmented", a.union_set});
    curriculum::DatasetRef dev = original;
    curriculum::DatasetRef dev_easy = augmented;
    if (!config.io.dev.empty()) {
      auto dev_path = resolve(config.io.dev);
      auto dev_samples = corpus::load_corpus(dev_path);
      manifest["inputs"]["dev"] = {{"name", dev_path.filename().string()}, {"sha256", sha256_file(dev_path)}};
      dev = std::make_shared<curriculum::Dataset>(curriculum::Dataset{"dev", dev_samples});
      if (config.io.dev_easy.empty()) {
        Augmented dev_aug = augment(dev_samples, config, options, suite, derive_seed(options.seed, "pipeline/dev"));
        dev_easy = std::make_shared<curriculum::Dataset>(curriculum::Dataset{"dev_easy", dev_aug.union_set});
      }
    }
    if (!config.io.dev_easy.empty()) {
      auto path = resolve(config.io.dev_easy);
      manifest["inputs"]["dev_easy"] = {{"name", path.filename().string()}, {"sha256", sha256_file(path)}};
      dev_easy = std::make_shared<curriculum::Dataset>(curriculum::Dataset{"dev_easy", corpus::load_corpus(path)});
    }

    if (corpus.empty() || a.union_set.empty() || dev->samples.empty() || dev_easy->samples.empty()) {
      write_json("curriculum_plan.json", Json{{"status", "skipped"}, {"reason", "a curriculum dataset is empty"}});
      end("skipped", "a curriculum dataset is empty");
    } else {
      auto plan = curriculum::build_plan(curriculum::parse_variant(config.curriculum.variant), original, augmented, dev,
                                         dev_easy, config.curriculum.patience_easy, config.curriculum.patience_hard,
                                         derive_seed(options.seed, "pipeline/curriculum"));
      Json plan_json = plan.manifest();
      plan_json["trainer"] = config.curriculum.trainer;
      plan_json["max_epochs"] = config.curriculum.max_epochs;
      write_json("curriculum_plan.json", plan_json);
      end();
    }
    manifest["status"] = "completed";
  } catch (const std::exception& e) {
    if (!manifest["stages"].empty()) manifest["stages"].back()["status"] = "failed";
    manifest["status"] = "failed";
    manifest["failed_stage"] = manifest["stages"].empty() ? Json(current) : manifest["stages"].back()["name"];
    manifest["error"] = e.what();
  }
  return finish();
}

}  // namespace d3::pipeline
