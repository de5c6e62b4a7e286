/* Copyright (c) 2026 collapse-lab authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "model.hpp"

namespace clab {

// Mann-Whitney rank statistic with average ranks for ties, so degenerate
// constant predictors score exactly 0.5. Both classes must be present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct TrainConfig {
  enum class Optimizer { Adam, SgdFull };
  Optimizer optimizer = Optimizer::Adam;
  double lr = 1e-3;
  double weight_decay = 1e-6;
  bool decay_exempt_embeddings = false;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int batch_size = 2048;
  int max_epochs = 20;
  int patience = 3;       // early stop on val AUC
  int metric_every = 0;   // steps between IA snapshots; 0 disables
  std::uint64_t seed = 0;
  bool spill_best_to_disk = false;  // keep the best-val snapshot on disk
  std::string spill_dir;

  void validate() const {
    if (lr <= 0.0) throw config_error("train: lr must be > 0");
    if (patience < 1) throw config_error("train: patience must be >= 1");
    if (batch_size < 1) throw config_error("train: batch_size must be >= 1");
    if (max_epochs < 1) throw config_error("train: max_epochs must be >= 1");
  }
};

struct IaSample {
  long step;
  std::string field;
  double ia;
};

struct EpochStats {
  double train_loss;
  double val_auc;
};

struct RunRecord {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;
  int stopped_epoch = 0;
  double test_auc = 0.0;
  std::vector<IaSample> ia_trajectory;
  double wall_seconds = 0.0;
};

// Stops after `patience` consecutive epochs without a val-AUC improvement.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}
  // Returns true when training should stop after this epoch.
  bool observe(int epoch, double val_auc);
  int best_epoch() const { return best_epoch_; }
  bool improved_last() const { return improved_last_; }

 private:
  int patience_;
  double best_ = -1.0;
  int best_epoch_ = 0;
  int fails_ = 0;
  bool improved_last_ = false;
};

// Minibatch training with BCE plus the weighted unitary regularizer; early
// stopping on validation AUC; the reported test AUC always comes from the
// restored best-val parameters. Aborts with numeric_error (carrying step and
// slot norms) when the loss goes non-finite.
RunRecord train(Model& model, const Splits& splits, const TrainConfig& cfg);

std::vector<double> score_dataset(Model& model, const Dataset& ds);

struct ToyResult {
  std::vector<std::pair<long, double>> trajectory;  // (step, IA of the trained table)
  double initial_ia = 0.0;
  double final_ia = 0.0;
};

// Three-field FM interaction; the first field's table is trained by
// full-batch SGD at lr = 1 while the other two stay fixed; IA is recorded on
// a logarithmic snapshot schedule. lr is overridable for the freeze test.
ToyResult run_toy(int d3, int steps, int k, std::uint64_t seed, double lr = 1.0);

// Steps {0, 1, 2, 5, 10, 20, ...} clipped to total_steps, always including
// the final step.
std::vector<long> log_snapshot_schedule(long total_steps);

}  // namespace clab
