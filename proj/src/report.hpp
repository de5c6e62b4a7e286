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

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrics.hpp"
#include "model.hpp"
#include "train.hpp"

namespace clab {

using ordered_json = nlohmann::ordered_json;

// Checkpoint: one file per slot in the matrix text format plus a JSON
// manifest mapping slot name -> file and shape. First-layer dcnv2 blocks are
// additionally exported as individual W_{i}_{j} slots for analysis.
void write_checkpoint(const Model& model, const std::string& dir, long step);

struct LoadedCheckpoint {
  long step = 0;
  ordered_json model_info;
  std::map<std::string, Matrix> slots;
};

LoadedCheckpoint read_checkpoint(const std::string& manifest_path);

// Everything the collapse analysis needs, independent of whether it came
// from a live model or a checkpoint on disk.
struct AnalysisInputs {
  FieldSchema schema;
  std::string interaction;
  int sets = 1;
  int embedding_size = 0;
  std::vector<std::vector<Matrix>> tables;  // [m][i]
  std::vector<PairMap> blocks;              // per set; empty when no projections
};

AnalysisInputs analysis_inputs_from_model(const Model& model);
AnalysisInputs analysis_inputs_from_checkpoint(const LoadedCheckpoint& ckpt,
                                               const FieldSchema& schema);

struct PerSetGrid {
  IaGrid grid;
  GridSummaries sums;
};

struct CollapseReportData {
  std::vector<std::string> field_names;
  std::vector<double> ia_per_field;  // IA of the concatenated per-field embedding
  bool has_grid = false;
  std::vector<PerSetGrid> grids;     // one per set
  double row_corr = 0.0, col_corr = 0.0;       // mean across sets
  std::vector<double> row_sums, col_sums;      // rank-wise mean across sets
  std::string diversity_kind;        // "sets" (M > 1) or "split" (M = 1)
  int split_parts = 0;
  std::vector<Matrix> diversity;     // per field, pairwise diversity matrix
  double mean_diversity = 0.0;       // mean over fields and unordered pairs
  std::vector<Matrix> block_norms;   // per set, Frobenius norms of W_{i->j}
  std::vector<IaSample> trajectory;
};

CollapseReportData build_collapse_report(const AnalysisInputs& in,
                                         const std::vector<IaSample>& trajectory,
                                         int split_parts,
                                         bool grid_exclude_diagonal);

ordered_json collapse_report_json(const CollapseReportData& data,
                                  const ordered_json& config_echo,
                                  std::uint64_t seed);

ordered_json run_record_json(const RunRecord& rec, const TrainConfig& cfg,
                             const ordered_json& config_echo, std::uint64_t seed);

// Plot-ready CSV side outputs.
void write_report_csvs(const CollapseReportData& data, const std::string& dir);

// Schema file: {"fields": [{"name": ..., "cardinality": ...}]}
FieldSchema read_schema_json(const std::string& path);
ordered_json schema_to_json(const FieldSchema& schema);

void write_json(const std::string& path, const ordered_json& j);
ordered_json parse_json_text(const std::string& text, const std::string& origin);
ordered_json read_json_file(const std::string& path);

}  // namespace clab
