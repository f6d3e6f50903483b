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

#include "d3/curriculum/runner.hpp"

#include <exception>

namespace d3::curriculum {

nlohmann::ordered_json RunResult::to_json() const {
  nlohmann::ordered_json log_json = nlohmann::ordered_json::array();
  for (const auto& r : log) {
    log_json.push_back({{"phase", r.phase}, {"epoch", r.epoch}, {"dev_loss", r.dev_loss}, {"is_best", r.is_best}});
  }
  nlohmann::ordered_json phases_json = nlohmann::ordered_json::array();
  for (const auto& p : phases) {
    phases_json.push_back({{"name", p.name},
                           {"epochs", p.epochs},
                           {"best_epoch", p.best_epoch},
                           {"best_loss", p.best_loss},
                           {"hit_epoch_cap", p.hit_epoch_cap}});
  }
  nlohmann::ordered_json j = {{"status", completed ? "completed" : "failed"},
                              {"final_checkpoint", final_checkpoint.label},
                              {"phases", phases_json},
                              {"log", log_json}};
  if (!completed) j["error"] = error;
  return j;
}

RunResult run_plan(const CurriculumPlan& plan, Trainer& trainer, const RunOptions& options) {
  RunResult result;
  try {
    for (const auto& phase : plan.phases) {
      PhaseSummary summary{phase.name};
      Checkpoint best;
      bool have_best = false;
      std::size_t stale = 0;
      for (std::size_t epoch = 1; epoch <= options.max_epochs; ++epoch) {
        trainer.train_epoch(*phase.train);
        const double loss = trainer.eval_loss(*phase.dev);
        const bool improved = !have_best || loss < summary.best_loss;
        result.log.push_back({phase.name, epoch, loss, improved});
        summary.epochs = epoch;
        if (improved) {
          best = trainer.snapshot();
          have_best = true;
          summary.best_loss = loss;
          summary.best_epoch = epoch;
          stale = 0;
        } else if (++stale >= phase.patience) {
          break;
        }
        if (epoch == options.max_epochs) summary.hit_epoch_cap = true;
      }
      if (have_best) {
        trainer.restore(best);
        result.final_checkpoint = best;
      }
      result.phases.push_back(summary);
    }
    result.completed = true;
  } catch (const std::exception& e) {
    result.completed = false;
    result.error = e.what();
  }
  return result;
}

}  // namespace d3::curriculum
