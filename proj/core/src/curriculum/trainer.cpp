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

#include "d3/curriculum/trainer.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "d3/common/error.hpp"
#include "d3/corpus/tokenizer.hpp"

namespace d3::curriculum {

void ScriptedTrainer::train_epoch(const Dataset& data) {
  ++epochs_;
  calls_.push_back("train " + data.name);
}

double ScriptedTrainer::eval_loss(const Dataset& dev) {
  if (evals_ >= fail_after_) {
    calls_.push_back("eval " + dev.name + " error");
    throw Error("scripted trainer failure at eval " + std::to_string(evals_ + 1));
  }
  if (losses_.empty()) throw Error("scripted trainer ran out of losses");
  double loss = losses_.front();
  losses_.pop_front();
  ++evals_;
  std::ostringstream os;
  os << "eval " << dev.name << ' ' << loss;
  calls_.push_back(os.str());
  return loss;
}

Checkpoint ScriptedTrainer::snapshot() {
  Checkpoint c{"ckpt-" + std::to_string(epochs_), std::to_string(epochs_)};
  calls_.push_back("snapshot " + c.label);
  return c;
}

void ScriptedTrainer::restore(const Checkpoint& checkpoint) { calls_.push_back("restore " + checkpoint.label); }

namespace {

std::vector<std::string> response_tokens(const corpus::DialogueSample& s) { return corpus::tokenize(s.response.text()); }

}  // namespace

void UnigramTrainer::train_epoch(const Dataset& data) {
  if (data.samples.empty()) throw Error("cannot train on empty dataset '" + data.name + "'");
  const std::size_t windows = std::max<std::size_t>(1, std::min(options_.windows, data.samples.size()));
  const std::size_t w = step_ % windows;
  const std::size_t lo = data.samples.size() * w / windows;
  const std::size_t hi = data.samples.size() * (w + 1) / windows;

  std::map<std::string, double> counts;
  double total = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    for (const auto& t : response_tokens(data.samples[i])) {
      counts[t] += 1.0;
      total += 1.0;
    }
  }
  ++step_;
  if (total == 0.0) return;
  const double lr = distribution_.empty() ? 1.0 : options_.learning_rate;
  for (auto& [tok, p] : distribution_) p *= 1.0 - lr;
  for (const auto& [tok, c] : counts) distribution_[tok] += lr * c / total;
}

double UnigramTrainer::eval_loss(const Dataset& dev) {
  std::set<std::string> unseen;
  for (const auto& s : dev.samples)
    for (const auto& t : response_tokens(s))
      if (!distribution_.count(t)) unseen.insert(t);
  const double vocab = static_cast<double>(distribution_.size() + unseen.size() + 1);
  const double lambda = distribution_.empty() ? 1.0 : options_.smoothing;
  double nll = 0.0;
  std::size_t n = 0;
  for (const auto& s : dev.samples) {
    for (const auto& t : response_tokens(s)) {
      auto it = distribution_.find(t);
      double p = (it == distribution_.end() ? 0.0 : it->second);
      nll -= std::log((1.0 - lambda) * p + lambda / vocab);
      ++n;
    }
  }
  return n == 0 ? 0.0 : nll / static_cast<double>(n);
}

Checkpoint UnigramTrainer::snapshot() {
  nlohmann::ordered_json j;
  j["step"] = step_;
  j["distribution"] = distribution_;
  return Checkpoint{"step-" + std::to_string(step_), j.dump()};
}

void UnigramTrainer::restore(const Checkpoint& checkpoint) {
  auto j = nlohmann::json::parse(checkpoint.state);
  step_ = j.at("step").get<std::size_t>();
  distribution_ = j.at("distribution").get<std::map<std::string, double>>();
}

}  // namespace d3::curriculum
