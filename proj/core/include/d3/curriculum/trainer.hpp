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

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "d3/curriculum/plan.hpp"

namespace d3::curriculum {

struct Checkpoint {
  std::string label;
  std::string state;
};

// What the orchestrator needs from a model. Learning-rate and optimizer
// settings stay inside the trainer; keep them identical across phases.
// eval_loss must be deterministic for a fixed state and dev set.
class Trainer {
 public:
  virtual ~Trainer() = default;
  virtual std::string name() const = 0;
  virtual void train_epoch(const Dataset& data) = 0;
  virtual double eval_loss(const Dataset& dev) = 0;
  virtual Checkpoint snapshot() = 0;
  virtual void restore(const Checkpoint& checkpoint) = 0;
};

// Replays a fixed list of dev losses and records every call, e.g.
// "train easy", "eval dev_easy 4", "snapshot ckpt-2", "restore ckpt-2".
// With fail_after_evals set, the next eval past that count throws.
class ScriptedTrainer final : public Trainer {
 public:
  explicit ScriptedTrainer(std::vector<double> losses, std::size_t fail_after_evals = SIZE_MAX)
      : losses_(losses.begin(), losses.end()), fail_after_(fail_after_evals) {}

  std::string name() const override { return "scripted"; }
  void train_epoch(const Dataset& data) override;
  double eval_loss(const Dataset& dev) override;
  Checkpoint snapshot() override;
  void restore(const Checkpoint& checkpoint) override;

  const std::vector<std::string>& calls() const noexcept { return calls_; }
  std::size_t epochs_trained() const noexcept { return epochs_; }

 private:
  std::deque<double> losses_;
  std::size_t fail_after_;
  std::size_t evals_ = 0;
  std::size_t epochs_ = 0;
  std::vector<std::string> calls_;
};

// A smoothed unigram language model over response tokens. Each epoch moves
// the distribution a step towards the counts of the next window of the
// training set, so dev loss fluctuates and plateaus like a real model's.
class UnigramTrainer final : public Trainer {
 public:
  struct Options {
    double learning_rate = 0.5;
    double smoothing = 0.05;
    std::size_t windows = 4;
  };

  UnigramTrainer() : UnigramTrainer(Options{}) {}
  explicit UnigramTrainer(Options options) : options_(options) {}

  std::string name() const override { return "unigram-lm"; }
  void train_epoch(const Dataset& data) override;
  double eval_loss(const Dataset& dev) override;
  Checkpoint snapshot() override;
  void restore(const Checkpoint& checkpoint) override;

 private:
  Options options_;
  std::map<std::string, double> distribution_;
  std::size_t step_ = 0;
};

}  // namespace d3::curriculum
