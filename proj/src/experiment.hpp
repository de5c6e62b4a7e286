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
#include "report.hpp"

namespace clab {

struct DataConfig {
  std::string source = "two-pattern";  // toy | two-pattern | csv
  std::string csv_path;
  int rows = 10000;
  std::vector<int> cardinalities = {20, 20, 20, 20};
  int hidden_dim = 4;
  int pairs_per_pattern = 3;
  double w1 = 1.0;
  double w2 = 1.0;
  double noise = 0.1;
  int d3 = 3;  // toy only
  std::uint64_t seed = 0;
  double fraction = 1.0;
  std::uint64_t fraction_seed = 0;
  std::array<double, 3> split_ratios = {8, 1, 1};
  std::uint64_t split_seed = 0;
};

struct AnalysisConfig {
  bool collapse_report = true;
  bool checkpoint = true;
  int split_parts = 2;
  bool grid_exclude_diagonal = false;
};

// One experiment: data + model + training + analysis sections plus the
// output directory. Unknown keys are rejected on load; the fully-resolved
// config is echoed verbatim into every report.
struct ExperimentConfig {
  DataConfig data;
  ModelSpec model;
  TrainConfig train;
  AnalysisConfig analysis;
  std::string output_dir;

  static ExperimentConfig from_json(const ordered_json& j);
  static ExperimentConfig from_file(const std::string& path);
  ordered_json echo() const;
};

Dataset build_dataset(const DataConfig& cfg, TwoPatternAudit* audit = nullptr);

struct RunOutputs {
  ExperimentConfig config;
  RunRecord record;
  CollapseReportData report;
  double mean_ia = 0.0;  // mean over fields of the concatenated-embedding IA
};

// Runs one experiment end to end and, when output_dir is non-empty, writes
// run_record.json, collapse_report.json, the CSV side files and the
// checkpoint into it.
RunOutputs run_experiment(const ExperimentConfig& cfg);

// CLI subcommand bodies. All of them throw the typed errors from error.hpp;
// the C API layer maps those onto exit codes.
void cmd_train(const std::string& config_path);
void cmd_train_json(const std::string& config_json_text);

void cmd_toy(const std::vector<int>& d3_values, int steps,
             const std::vector<std::uint64_t>& seeds, int embedding_size,
             const std::string& out_dir);

void cmd_analyze(const std::string& manifest_path, const std::string& schema_path,
                 const std::string& out_dir, int split_parts = 2);

// vary entries look like "model.embedding_size=8,16" (aliases: K, M,
// fraction, unitary_reg_weight). Cartesian product of values x seeds; one
// summary row per cell with the median test AUC and median mean-IA.
void cmd_sweep(const std::string& config_path,
               const std::vector<std::string>& vary,
               const std::vector<std::uint64_t>& seeds);

void cmd_gen_data(const std::string& generator, const std::string& params_json,
                  const std::string& out_dir);

// Bounded worker count for sweep cells: COLLAPSE_LAB_THREADS, defaulting to
// the hardware concurrency.
int worker_pool_size(std::size_t n_jobs);

}  // namespace clab
