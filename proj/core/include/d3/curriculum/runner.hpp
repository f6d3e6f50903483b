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

#include <nlohmann/json.hpp>

#include "d3/curriculum/plan.hpp"
#include "d3/curriculum/trainer.hpp"

namespace d3::curriculum {

struct EpochRecord {
  std::string phase;
  std::size_t epoch = 0;  // 1-based within the phase
  double dev_loss = 0.0;
  bool is_best = false;
};

struct PhaseSummary {
  std::string name;
  std::size_t epochs = 0;
  std::size_t best_epoch = 0;
  double best_loss = 0.0;
  bool hit_epoch_cap = false;
};

struct RunResult {
  Checkpoint final_checkpoint;
  std::vector<EpochRecord> log;
  std::vector<PhaseSummary> phases;
  bool completed = false;
  std::string error;

  nlohmann::ordered_json to_json() const;
};

struct RunOptions {
  std::size_t max_epochs = 200;
};

// Per phase: train an epoch, evaluate, keep the best-so-far checkpoint, and
// stop once `patience` consecutive epochs fail to beat the best loss. The
// best checkpoint is restored before the next phase starts. A trainer
// exception ends the run with completed = false and the log so far.
RunResult run_plan(const CurriculumPlan& plan, Trainer& trainer, const RunOptions& options = {});

}  // namespace d3::curriculum
