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

#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "io_util.hpp"

namespace fs = std::filesystem;

namespace clab {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_json(const std::string& path, const ordered_json& j) {
  atomic_write_text(path, j.dump(2) + "\n");
}

ordered_json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(origin + ": " + e.what());
  }
}

ordered_json read_json_file(const std::string& path) {
  return parse_json_text(read_text_file(path), path);
}

void write_checkpoint(const Model& model, const std::string& dir, long step) {
  const ModelSpec& spec = model.spec();
  ensure_dir(dir + "/slots");

  ordered_json slots = ordered_json::object();
  auto emit = [&](const std::string& name, const Matrix& m) {
    const std::string rel = "slots/" + name + ".txt";
    write_matrix_text(dir + "/" + rel, m);
    slots[name] = {{"file", rel}, {"rows", m.rows()}, {"cols", m.cols()}};
  };

  const ParamStore& store = model.store();
  for (int s = 0; s < store.slot_count(); ++s) {
    emit(store.name(s), store.value(s));
  }
  if (model.has_projection_blocks()) {
    const int param_sets = spec.me_shared_interaction ? 1 : spec.sets;
    for (int m = 0; m < param_sets; ++m) {
      for (int i = 0; i < model.schema().n(); ++i) {
        for (int j = 0; j < model.schema().n(); ++j) {
          emit("W_" + std::to_string(i) + "_" + std::to_string(j) +
                   Model::slot_suffix(spec, m),
               model.projection_block(m, i, j));
        }
      }
    }
  }

  ordered_json manifest;
  manifest["step"] = step;
  manifest["model"] = {{"interaction", interaction_to_string(spec.interaction)},
                       {"embedding_size", spec.embedding_size},
                       {"embedding_sets", spec.sets},
                       {"cross_layers", spec.cross_layers},
                       {"me_shared_interaction", spec.me_shared_interaction},
                       {"unitary_reg_weight", spec.unitary_reg_weight}};
  manifest["schema"] = schema_to_json(model.schema());
  manifest["slots"] = std::move(slots);
  write_json(dir + "/manifest.json", manifest);
}

LoadedCheckpoint read_checkpoint(const std::string& manifest_path) {
  const ordered_json manifest = read_json_file(manifest_path);
  LoadedCheckpoint out;
  if (!manifest.contains("slots") || !manifest["slots"].is_object()) {
    throw data_error(manifest_path + ": manifest has no slots object");
  }
  out.step = manifest.value("step", 0L);
  if (manifest.contains("model")) out.model_info = manifest["model"];
  const fs::path base = fs::path(manifest_path).parent_path();
  for (const auto& [name, entry] : manifest["slots"].items()) {
    const std::string file = entry.at("file").get<std::string>();
    Matrix m = read_matrix_text((base / file).string());
    if (m.rows() != entry.at("rows").get<std::size_t>() ||
        m.cols() != entry.at("cols").get<std::size_t>()) {
      throw data_error(manifest_path + ": slot " + name +
                       " shape does not match its manifest entry");
    }
    out.slots.emplace(name, std::move(m));
  }
  return out;
}

AnalysisInputs analysis_inputs_from_model(const Model& model) {
  AnalysisInputs in;
  in.schema = model.schema();
  in.interaction = interaction_to_string(model.spec().interaction);
  in.sets = model.spec().sets;
  in.embedding_size = model.spec().embedding_size;
  in.tables.resize(in.sets);
  for (int m = 0; m < in.sets; ++m) {
    for (int i = 0; i < in.schema.n(); ++i) {
      in.tables[m].push_back(model.embedding_table(m, i));
    }
  }
  if (model.has_projection_blocks()) {
    const int param_sets =
        model.spec().me_shared_interaction ? 1 : model.spec().sets;
    in.blocks.resize(param_sets);
    for (int m = 0; m < param_sets; ++m) {
      for (int i = 0; i < in.schema.n(); ++i) {
        for (int j = 0; j < in.schema.n(); ++j) {
          in.blocks[m][{i, j}] = model.projection_block(m, i, j);
        }
      }
    }
  }
  return in;
}

AnalysisInputs analysis_inputs_from_checkpoint(const LoadedCheckpoint& ckpt,
                                               const FieldSchema& schema) {
  AnalysisInputs in;
  in.schema = schema;
  in.interaction = ckpt.model_info.value("interaction", std::string("dnn_concat"));
  in.sets = ckpt.model_info.value("embedding_sets", 1);
  const int n = schema.n();

  auto slot = [&](const std::string& name) -> const Matrix& {
    auto it = ckpt.slots.find(name);
    if (it == ckpt.slots.end()) {
      throw data_error("checkpoint is missing slot " + name);
    }
    return it->second;
  };

  in.tables.resize(in.sets);
  for (int m = 0; m < in.sets; ++m) {
    const std::string sfx = in.sets == 1 ? "" : ".m" + std::to_string(m);
    for (int i = 0; i < n; ++i) {
      const Matrix& t = slot("E_" + std::to_string(i) + sfx);
      if (static_cast<int>(t.rows()) != schema.fields[i].cardinality) {
        throw data_error("embedding E_" + std::to_string(i) + sfx +
                         " rows do not match the schema cardinality");
      }
      in.tables[m].push_back(t);
    }
  }
  in.embedding_size = ckpt.model_info.value(
      "embedding_size", static_cast<int>(in.tables[0][0].cols()));

  const bool shared = ckpt.model_info.value("me_shared_interaction", false);
  const int param_sets = shared ? 1 : in.sets;
  const std::string probe = "W_0_0" + std::string(param_sets == 1 && in.sets == 1
                                                      ? ""
                                                      : ".m0");
  if (ckpt.slots.count(probe)) {
    in.blocks.resize(param_sets);
    for (int m = 0; m < param_sets; ++m) {
      const std::string sfx =
          (param_sets == 1 && in.sets == 1) ? "" : ".m" + std::to_string(m);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          in.blocks[m][{i, j}] =
              slot("W_" + std::to_string(i) + "_" + std::to_string(j) + sfx);
        }
      }
    }
  }
  return in;
}

CollapseReportData build_collapse_report(const AnalysisInputs& in,
                                         const std::vector<IaSample>& trajectory,
                                         int split_parts,
                                         bool grid_exclude_diagonal) {
  const int n = in.schema.n();
  CollapseReportData out;
  out.trajectory = trajectory;
  for (int i = 0; i < n; ++i) out.field_names.push_back(in.schema.fields[i].name);

  for (int i = 0; i < n; ++i) {
    Matrix cat = in.tables[0][i];
    for (int m = 1; m < in.sets; ++m) cat = hcat(cat, in.tables[m][i]);
    out.ia_per_field.push_back(information_abundance(cat));
  }

  // Sub-embedding IA grids: explicit projections for dcnv2, column slices
  // for ffm (diagonal cells carry the raw table's IA).
  std::vector<IaGrid> raw_grids;
  if (in.interaction == "dcnv2" && !in.blocks.empty()) {
    for (std::size_t m = 0; m < in.blocks.size(); ++m) {
      const int tm = std::min<int>(static_cast<int>(m), in.sets - 1);
      raw_grids.push_back(sub_embedding_ia_grid(in.tables[tm], in.blocks[m]));
    }
  } else if (in.interaction == "ffm" && n >= 2 &&
             in.embedding_size % (n - 1) == 0) {
    const int w = in.embedding_size / (n - 1);
    for (int m = 0; m < in.sets; ++m) {
      std::vector<std::vector<Matrix>> subs(n, std::vector<Matrix>(n));
      for (int i = 0; i < n; ++i) {
        subs[i][i] = in.tables[m][i];
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const int off = (j - (j > i ? 1 : 0)) * w;
          subs[i][j] = block(in.tables[m][i], 0, off,
                             in.tables[m][i].rows(), w);
        }
      }
      raw_grids.push_back(ia_grid_from_sub_embeddings(in.tables[m], subs));
    }
  }

  if (!raw_grids.empty()) {
    out.has_grid = true;
    for (IaGrid& g : raw_grids) {
      PerSetGrid psg;
      psg.grid = std::move(g);
      if (n >= 3) {
        psg.sums = ia_grid_summaries(psg.grid, !grid_exclude_diagonal);
      }
      out.grids.push_back(std::move(psg));
    }
    if (n >= 3) {
      out.row_sums.assign(n, 0.0);
      out.col_sums.assign(n, 0.0);
      for (const PerSetGrid& g : out.grids) {
        out.row_corr += g.sums.row_corr;
        out.col_corr += g.sums.col_corr;
        for (int r = 0; r < n; ++r) {
          out.row_sums[r] += g.sums.row_sums[r];
          out.col_sums[r] += g.sums.col_sums[r];
        }
      }
      const double inv = 1.0 / static_cast<double>(out.grids.size());
      out.row_corr *= inv;
      out.col_corr *= inv;
      for (int r = 0; r < n; ++r) {
        out.row_sums[r] *= inv;
        out.col_sums[r] *= inv;
      }
    }
  }

  // Diversity: across embedding sets when M > 1, otherwise across column
  // splits of the single set (when the width divides evenly).
  std::vector<std::vector<Matrix>> pieces_per_field;
  if (in.sets > 1) {
    out.diversity_kind = "sets";
    out.split_parts = in.sets;
    for (int i = 0; i < n; ++i) {
      std::vector<Matrix> pieces;
      for (int m = 0; m < in.sets; ++m) pieces.push_back(in.tables[m][i]);
      pieces_per_field.push_back(std::move(pieces));
    }
  } else if (split_parts >= 2 && in.embedding_size % split_parts == 0) {
    out.diversity_kind = "split";
    out.split_parts = split_parts;
    const int w = in.embedding_size / split_parts;
    for (int i = 0; i < n; ++i) {
      std::vector<Matrix> pieces;
      for (int p = 0; p < split_parts; ++p) {
        pieces.push_back(block(in.tables[0][i], 0, p * w,
                               in.tables[0][i].rows(), w));
      }
      pieces_per_field.push_back(std::move(pieces));
    }
  }
  if (!pieces_per_field.empty()) {
    double acc = 0.0;
    std::size_t count = 0;
    for (int i = 0; i < n; ++i) {
      const auto& pieces = pieces_per_field[i];
      const int p = static_cast<int>(pieces.size());
      Matrix d(p, p);
      for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
          const double v = diversity(pieces[a], pieces[b]);
          d(a, b) = v;
          d(b, a) = v;
          acc += v;
          ++count;
        }
      }
      out.diversity.push_back(std::move(d));
    }
    out.mean_diversity = count ? acc / static_cast<double>(count) : 0.0;
  }

  if (in.interaction == "dcnv2" && !in.blocks.empty()) {
    for (const PairMap& bm : in.blocks) {
      Matrix norms(n, n);
      for (const auto& [key, w] : bm) norms(key.first, key.second) = frobenius_norm(w);
      out.block_norms.push_back(std::move(norms));
    }
  }
  return out;
}

ordered_json collapse_report_json(const CollapseReportData& data,
                                  const ordered_json& config_echo,
                                  std::uint64_t seed) {
  ordered_json j;
  j["config"] = config_echo;
  j["seed"] = seed;

  ordered_json iapf = ordered_json::array();
  for (std::size_t i = 0; i < data.ia_per_field.size(); ++i) {
    iapf.push_back({{"field", data.field_names[i]}, {"ia", data.ia_per_field[i]}});
  }
  j["ia_per_field"] = std::move(iapf);

  if (data.has_grid) {
    ordered_json grid;
    ordered_json per_set = ordered_json::array();
    for (const PerSetGrid& g : data.grids) {
      ordered_json e;
      e["values"] = matrix_to_json(g.grid.values);
      e["field_order"] = g.grid.field_order;
      e["row_sums"] = g.sums.row_sums;
      e["col_sums"] = g.sums.col_sums;
      e["row_corr"] = g.sums.row_corr;
      e["col_corr"] = g.sums.col_corr;
      per_set.push_back(std::move(e));
    }
    if (data.grids.size() == 1) {
      grid["values"] = matrix_to_json(data.grids[0].grid.values);
      grid["field_order"] = data.grids[0].grid.field_order;
    }
    grid["per_set"] = std::move(per_set);
    j["ia_grid"] = std::move(grid);
    j["row_sums"] = data.row_sums;
    j["col_sums"] = data.col_sums;
    j["row_corr"] = data.row_corr;
    j["col_corr"] = data.col_corr;
  } else {
    j["ia_grid"] = nullptr;
    j["row_sums"] = nullptr;
    j["col_sums"] = nullptr;
    j["row_corr"] = nullptr;
    j["col_corr"] = nullptr;
  }

  if (!data.diversity.empty()) {
    ordered_json dm = ordered_json::array();
    for (std::size_t i = 0; i < data.diversity.size(); ++i) {
      dm.push_back({{"field", data.field_names[i]},
                    {"matrix", matrix_to_json(data.diversity[i])}});
    }
    j["diversity_matrix"] = std::move(dm);
    j["diversity_kind"] = data.diversity_kind;
    j["split_parts"] = data.split_parts;
    j["mean_diversity"] = data.mean_diversity;
  } else {
    j["diversity_matrix"] = nullptr;
    j["diversity_kind"] = nullptr;
    j["split_parts"] = nullptr;
    j["mean_diversity"] = nullptr;
  }

  if (!data.block_norms.empty()) {
    ordered_json bn = ordered_json::array();
    for (std::size_t m = 0; m < data.block_norms.size(); ++m) {
      bn.push_back({{"set", m}, {"values", matrix_to_json(data.block_norms[m])}});
    }
    j["block_norms"] = std::move(bn);
  } else {
    j["block_norms"] = nullptr;
  }

  ordered_json traj = ordered_json::array();
  for (const IaSample& s : data.trajectory) {
    traj.push_back({{"step", s.step}, {"field", s.field}, {"ia", s.ia}});
  }
  j["ia_trajectory"] = std::move(traj);
  return j;
}

ordered_json run_record_json(const RunRecord& rec, const TrainConfig& cfg,
                             const ordered_json& config_echo, std::uint64_t seed) {
  ordered_json j;
  j["config"] = config_echo;
  j["seed"] = seed;
  j["adam"] = {{"beta1", cfg.beta1}, {"beta2", cfg.beta2}, {"eps", cfg.eps}};
  ordered_json epochs = ordered_json::array();
  for (std::size_t e = 0; e < rec.epochs.size(); ++e) {
    epochs.push_back({{"epoch", e + 1},
                      {"train_loss", rec.epochs[e].train_loss},
                      {"val_auc", rec.epochs[e].val_auc}});
  }
  j["epochs"] = std::move(epochs);
  j["best_epoch"] = rec.best_epoch;
  j["stopped_epoch"] = rec.stopped_epoch;
  j["test_auc"] = rec.test_auc;
  ordered_json traj = ordered_json::array();
  for (const IaSample& s : rec.ia_trajectory) {
    traj.push_back({{"step", s.step}, {"field", s.field}, {"ia", s.ia}});
  }
  j["ia_trajectory"] = std::move(traj);
  j["wall_clock_seconds"] = rec.wall_seconds;
  return j;
}

void write_report_csvs(const CollapseReportData& data, const std::string& dir) {
  ensure_dir(dir);
  {
    std::string csv = "step,field,ia\n";
    for (const IaSample& s : data.trajectory) {
      csv += std::to_string(s.step) + "," + s.field + "," + fmt17(s.ia) + "\n";
    }
    atomic_write_text(dir + "/ia_trajectory.csv", csv);
  }
  {
    std::string csv = "field,ia\n";
    for (std::size_t i = 0; i < data.ia_per_field.size(); ++i) {
      csv += data.field_names[i] + "," + fmt17(data.ia_per_field[i]) + "\n";
    }
    atomic_write_text(dir + "/ia_per_field.csv", csv);
  }
  if (data.has_grid) {
    std::string csv = "set,i,j,field_i,field_j,ia\n";
    for (std::size_t m = 0; m < data.grids.size(); ++m) {
      const IaGrid& g = data.grids[m].grid;
      for (int i = 0; i < g.n_fields; ++i) {
        for (int jx = 0; jx < g.n_fields; ++jx) {
          csv += std::to_string(m) + "," + std::to_string(i) + "," +
                 std::to_string(jx) + "," + data.field_names[i] + "," +
                 data.field_names[jx] + "," + fmt17(g.values(i, jx)) + "\n";
        }
      }
    }
    atomic_write_text(dir + "/ia_grid.csv", csv);

    std::string sums = "set,rank,field,row_sum,col_sum\n";
    for (std::size_t m = 0; m < data.grids.size(); ++m) {
      const PerSetGrid& g = data.grids[m];
      for (std::size_t r = 0; r < g.sums.row_sums.size(); ++r) {
        sums += std::to_string(m) + "," + std::to_string(r) + "," +
                data.field_names[g.grid.field_order[r]] + "," +
                fmt17(g.sums.row_sums[r]) + "," + fmt17(g.sums.col_sums[r]) + "\n";
      }
    }
    atomic_write_text(dir + "/grid_sums.csv", sums);
  }
  if (!data.diversity.empty()) {
    std::string csv = "field,a,b,diversity\n";
    for (std::size_t i = 0; i < data.diversity.size(); ++i) {
      const Matrix& d = data.diversity[i];
      for (std::size_t a = 0; a < d.rows(); ++a) {
        for (std::size_t b = a + 1; b < d.cols(); ++b) {
          csv += data.field_names[i] + "," + std::to_string(a) + "," +
                 std::to_string(b) + "," + fmt17(d(a, b)) + "\n";
        }
      }
    }
    atomic_write_text(dir + "/diversity.csv", csv);
  }
  if (!data.block_norms.empty()) {
    std::string csv = "set,i,j,frobenius_norm\n";
    for (std::size_t m = 0; m < data.block_norms.size(); ++m) {
      const Matrix& bn = data.block_norms[m];
      for (std::size_t i = 0; i < bn.rows(); ++i) {
        for (std::size_t jx = 0; jx < bn.cols(); ++jx) {
          csv += std::to_string(m) + "," + std::to_string(i) + "," +
                 std::to_string(jx) + "," + fmt17(bn(i, jx)) + "\n";
        }
      }
    }
    atomic_write_text(dir + "/block_norms.csv", csv);
  }
}

FieldSchema read_schema_json(const std::string& path) {
  const ordered_json j = read_json_file(path);
  if (!j.contains("fields") || !j["fields"].is_array()) {
    throw data_error(path + ": schema file needs a 'fields' array");
  }
  FieldSchema schema;
  for (const auto& f : j["fields"]) {
    schema.fields.push_back(
        {f.at("name").get<std::string>(), f.at("cardinality").get<int>()});
  }
  schema.validate();
  return schema;
}

ordered_json schema_to_json(const FieldSchema& schema) {
  ordered_json fields = ordered_json::array();
  for (const auto& f : schema.fields) {
    fields.push_back({{"name", f.name}, {"cardinality", f.cardinality}});
  }
  return ordered_json{{"fields", std::move(fields)}};
}

}  // namespace clab
