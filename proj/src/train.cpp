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

#include "train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "io_util.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace clab {

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw contract_error("auc: scores/labels size mismatch");
  }
  std::size_t n_pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw contract_error("auc: labels must be 0/1");
    n_pos += static_cast<std::size_t>(y);
  }
  const std::size_t n = scores.size();
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw metric_error("auc: both classes must be present");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // average ranks over tie groups (ranks are 1-based)
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t p = i; p <= j; ++p) {
      if (labels[order[p]] == 1) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

bool EarlyStopper::observe(int epoch, double val_auc) {
  if (val_auc > best_) {
    best_ = val_auc;
    best_epoch_ = epoch;
    fails_ = 0;
    improved_last_ = true;
    return false;
  }
  improved_last_ = false;
  ++fails_;
  return fails_ >= patience_;
}

std::vector<double> score_dataset(Model& model, const Dataset& ds) {
  std::vector<double> scores;
  scores.reserve(ds.size());
  for (const auto& row : ds.rows) scores.push_back(model.forward_logit(row));
  return scores;
}

namespace {

void snapshot_ia(const Model& model, long step, std::vector<IaSample>* out) {
  const int m_sets = model.spec().sets;
  for (int m = 0; m < m_sets; ++m) {
    for (int i = 0; i < model.schema().n(); ++i) {
      std::string field = model.schema().fields[i].name;
      if (m_sets > 1) field += ".set" + std::to_string(m);
      out->push_back({step, field, information_abundance(model.embedding_table(m, i))});
    }
  }
}

std::string slot_norm_diagnostics(const ParamStore& store) {
  std::string out;
  for (int s = 0; s < store.slot_count(); ++s) {
    out += " " + store.name(s) + "=" +
           std::to_string(frobenius_norm(store.value(s)));
  }
  return out;
}

}  // namespace

RunRecord train(Model& model, const Splits& splits, const TrainConfig& cfg) {
  cfg.validate();
  if (splits.train.schema.n() != model.schema().n()) {
    throw contract_error("train: schema mismatch between model and data");
  }
  const auto t0 = std::chrono::steady_clock::now();

  AdamConfig adam;
  adam.lr = cfg.lr;
  adam.beta1 = cfg.beta1;
  adam.beta2 = cfg.beta2;
  adam.eps = cfg.eps;
  adam.weight_decay = cfg.weight_decay;
  adam.exempt_embeddings = cfg.decay_exempt_embeddings;

  RunRecord rec;
  EarlyStopper stopper(cfg.patience);
  ParamStore& store = model.store();

  std::vector<Matrix> best_values = store.snapshot_values();
  std::string spill_path;
  if (cfg.spill_best_to_disk) {
    spill_path = (cfg.spill_dir.empty() ? std::string(".") : cfg.spill_dir) +
                 "/best_snapshot";
    ensure_dir(spill_path);
  }

  long step = 0;
  if (cfg.metric_every > 0) snapshot_ia(model, 0, &rec.ia_trajectory);

  auto save_best = [&]() {
    if (cfg.spill_best_to_disk) {
      for (int s = 0; s < store.slot_count(); ++s) {
        write_matrix_text(spill_path + "/slot" + std::to_string(s) + ".txt",
                          store.value(s));
      }
    } else {
      best_values = store.snapshot_values();
    }
  };
  auto restore_best = [&]() {
    if (cfg.spill_best_to_disk) {
      std::vector<Matrix> vals;
      for (int s = 0; s < store.slot_count(); ++s) {
        vals.push_back(read_matrix_text(spill_path + "/slot" + std::to_string(s) + ".txt"));
      }
      store.restore_values(vals);
    } else {
      store.restore_values(best_values);
    }
  };
  save_best();  // epoch-0 parameters in case val AUC never improves

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto batch_list =
        batches(splits.train.size(), cfg.batch_size,
                derive_seed(cfg.seed, "epoch", static_cast<std::uint64_t>(epoch)));
    double loss_sum = 0.0;
    std::size_t n_seen = 0;

    for (const auto& batch : batch_list) {
      store.zero_grads();
      const double inv_b = 1.0 / static_cast<double>(batch.size());
      double batch_loss = 0.0;
      for (int row : batch) {
        const double z = model.forward_logit(splits.train.rows[row]);
        const BceResult bce = bce_loss(z, splits.train.labels[row]);
        batch_loss += bce.loss * inv_b;
        model.backward(bce.grad * inv_b);
      }
      if (model.spec().unitary_reg_weight > 0.0) {
        batch_loss += model.spec().unitary_reg_weight *
                      model.accumulate_unitary_reg(model.spec().unitary_reg_weight);
      }
      if (!std::isfinite(batch_loss)) {
        throw numeric_error("non-finite training loss at step " +
                            std::to_string(step) + "; slot norms:" +
                            slot_norm_diagnostics(store));
      }
      if (cfg.optimizer == TrainConfig::Optimizer::Adam) {
        store.adam_step(adam);
      } else {
        store.sgd_full_batch_step(cfg.lr);
      }
      ++step;
      loss_sum += batch_loss * static_cast<double>(batch.size());
      n_seen += batch.size();
      if (cfg.metric_every > 0 && step % cfg.metric_every == 0) {
        snapshot_ia(model, step, &rec.ia_trajectory);
      }
    }

    const double val_auc = auc(score_dataset(model, splits.val), splits.val.labels);
    rec.epochs.push_back({loss_sum / static_cast<double>(n_seen), val_auc});
    rec.stopped_epoch = epoch;

    const bool stop = stopper.observe(epoch, val_auc);
    if (stopper.improved_last()) save_best();
    if (stop) break;
  }

  rec.best_epoch = stopper.best_epoch();
  restore_best();
  rec.test_auc = auc(score_dataset(model, splits.test), splits.test.labels);

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<long> log_snapshot_schedule(long total_steps) {
  std::vector<long> out = {0};
  for (long base = 1; base <= total_steps; base *= 10) {
    for (long mult : {1, 2, 5}) {
      const long s = base * mult;
      if (s <= total_steps) out.push_back(s);
    }
  }
  if (out.back() != total_steps) out.push_back(total_steps);
  return out;
}

ToyResult run_toy(int d3, int steps, int k, std::uint64_t seed, double lr) {
  if (steps < 1) throw config_error("run_toy: steps must be >= 1");
  if (k < 1) throw config_error("run_toy: embedding size must be >= 1");
  const Dataset ds = gen_toy(d3, seed);
  const std::size_t n_rows = ds.size();

  // Tables drawn from the unit normal, matching toy-mode initialization.
  ModelSpec spec;
  spec.embedding_size = k;
  spec.init_scale = 1.0;
  spec.sets = 1;
  Matrix e1 = Matrix(100, k);
  {
    Rng rng(derive_seed(seed, "emb", 0, 0));
    for (std::size_t i = 0; i < e1.size(); ++i) e1.data()[i] = rng.normal();
  }
  Matrix e2(100, k), e3(static_cast<std::size_t>(d3), k);
  {
    Rng rng(derive_seed(seed, "emb", 0, 1));
    for (std::size_t i = 0; i < e2.size(); ++i) e2.data()[i] = rng.normal();
  }
  {
    Rng rng(derive_seed(seed, "emb", 0, 2));
    for (std::size_t i = 0; i < e3.size(); ++i) e3.data()[i] = rng.normal();
  }

  // FM over three fields with E_2, E_3 frozen: h_b = e1[x1] . s_b + c_b where
  // s_b = e2[x2] + e3[x3] and c_b = e2[x2] . e3[x3] are fixed, so they are
  // precomputed once and the full-batch gradient reduces to a row-indexed
  // accumulation. The equivalence with the tape engine is covered by tests.
  Matrix s(n_rows, static_cast<std::size_t>(k));
  std::vector<double> c(n_rows, 0.0);
  for (std::size_t b = 0; b < n_rows; ++b) {
    const double* r2 = e2.row(ds.rows[b][1]);
    const double* r3 = e3.row(ds.rows[b][2]);
    double* sb = s.row(b);
    double cb = 0.0;
    for (int d = 0; d < k; ++d) {
      sb[d] = r2[d] + r3[d];
      cb += r2[d] * r3[d];
    }
    c[b] = cb;
  }

  const std::vector<long> schedule = log_snapshot_schedule(steps);
  std::size_t next_snap = 0;

  ToyResult out;
  out.initial_ia = information_abundance(e1);
  if (schedule[next_snap] == 0) {
    out.trajectory.push_back({0, out.initial_ia});
    ++next_snap;
  }

  Matrix grad(100, static_cast<std::size_t>(k));
  const double inv_b = 1.0 / static_cast<double>(n_rows);
  for (long t = 1; t <= steps; ++t) {
    grad.fill(0.0);
    for (std::size_t b = 0; b < n_rows; ++b) {
      const int x1 = ds.rows[b][0];
      const double* row = e1.row(x1);
      const double* sb = s.row(b);
      double h = c[b];
      for (int d = 0; d < k; ++d) h += row[d] * sb[d];
      const double g = (sigmoid(h) - static_cast<double>(ds.labels[b])) * inv_b;
      double* gr = grad.row(x1);
      for (int d = 0; d < k; ++d) gr[d] += g * sb[d];
    }
    if (lr != 0.0) {
      for (std::size_t i = 0; i < e1.size(); ++i) {
        e1.data()[i] -= lr * grad.data()[i];
      }
    }
    if (next_snap < schedule.size() && schedule[next_snap] == t) {
      out.trajectory.push_back({t, information_abundance(e1)});
      ++next_snap;
    }
  }
  out.final_ia = out.trajectory.back().second;
  return out;
}

}  // namespace clab
