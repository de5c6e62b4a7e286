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

#include "model.hpp"

#include <cmath>

#include "rng.hpp"

namespace clab {

Interaction interaction_from_string(const std::string& s) {
  if (s == "dnn_concat") return Interaction::DnnConcat;
  if (s == "fm") return Interaction::Fm;
  if (s == "fwfm") return Interaction::FwFm;
  if (s == "ffm") return Interaction::Ffm;
  if (s == "ipnn") return Interaction::Ipnn;
  if (s == "dcnv2") return Interaction::Dcnv2;
  throw config_error("unknown interaction kind: " + s);
}

std::string interaction_to_string(Interaction i) {
  switch (i) {
    case Interaction::DnnConcat: return "dnn_concat";
    case Interaction::Fm: return "fm";
    case Interaction::FwFm: return "fwfm";
    case Interaction::Ffm: return "ffm";
    case Interaction::Ipnn: return "ipnn";
    case Interaction::Dcnv2: return "dcnv2";
  }
  return "?";
}

bool interaction_is_linear(Interaction i) {
  switch (i) {
    case Interaction::DnnConcat:
    case Interaction::Fm:
    case Interaction::FwFm:
    case Interaction::Ipnn:
      return true;
    case Interaction::Ffm:
    case Interaction::Dcnv2:
      return false;
  }
  return false;
}

void validate_model_spec(const ModelSpec& spec, const FieldSchema& schema) {
  schema.validate();
  if (spec.sets < 1) throw config_error("embedding_sets must be >= 1");
  if (spec.embedding_size < 1) throw config_error("embedding_size must be >= 1");
  if (spec.unitary_reg_weight < 0.0) {
    throw config_error("unitary_reg_weight must be >= 0");
  }
  for (int h : spec.mlp) {
    if (h < 1) throw config_error("mlp hidden sizes must be >= 1");
  }
  if (spec.interaction == Interaction::Dcnv2 && spec.cross_layers < 1) {
    throw config_error("dcnv2 needs cross_layers >= 1");
  }
  if (spec.interaction == Interaction::Ffm) {
    const int n = schema.n();
    if (spec.embedding_size % (n - 1) != 0) {
      throw config_error("ffm requires embedding_size divisible by N-1 (" +
                         std::to_string(spec.embedding_size) + " vs N=" +
                         std::to_string(n) + ")");
    }
  }
  if (spec.sets > 1 && interaction_is_linear(spec.interaction) &&
      !spec.nonlinear_projection_resolved()) {
    throw config_error(
        "multi-embedding with a linear interaction (" +
        interaction_to_string(spec.interaction) +
        ") requires the non-linear projection; without it the model is "
        "equivalent to single-embedding");
  }
}

namespace {

Matrix random_embedding_table(std::size_t rows, std::size_t cols, double scale,
                              std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  Matrix t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = scale * rng.normal();
  return t;
}

Matrix glorot_normal(std::size_t rows, std::size_t cols, std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  const double std = std::sqrt(2.0 / static_cast<double>(rows + cols));
  Matrix t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = std * rng.normal();
  return t;
}

}  // namespace

EmbeddingBank init_embeddings(const FieldSchema& schema, const ModelSpec& spec,
                              std::uint64_t seed) {
  EmbeddingBank bank;
  bank.tables.resize(spec.sets);
  for (int m = 0; m < spec.sets; ++m) {
    for (int i = 0; i < schema.n(); ++i) {
      bank.tables[m].push_back(random_embedding_table(
          schema.fields[i].cardinality, spec.embedding_size, spec.init_scale,
          derive_seed(seed, "emb", m, i)));
    }
  }
  return bank;
}

namespace interactions {

int fm(Graph& g, const std::vector<int>& e) {
  std::vector<int> dots;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      dots.push_back(g.dot(e[i], e[j]));
    }
  }
  return g.sum(dots);
}

int fwfm(Graph& g, const std::vector<int>& e, int r_slot) {
  std::vector<int> terms;
  int p = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j, ++p) {
      const int r = g.lookup_fixed(r_slot, 0, p, 1);
      terms.push_back(g.mul(r, g.dot(e[i], e[j])));
    }
  }
  return g.sum(terms);
}

int ffm(Graph& g, const std::vector<int>& emb_slots, int k) {
  const int n = static_cast<int>(emb_slots.size());
  const int w = k / (n - 1);
  // slice of field i aimed at field j: targets ordered ascending, i skipped
  auto slice_off = [&](int i, int j) { return (j - (j > i ? 1 : 0)) * w; };
  std::vector<int> dots;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int a = g.lookup(emb_slots[i], i, slice_off(i, j), w);
      const int b = g.lookup(emb_slots[j], j, slice_off(j, i), w);
      dots.push_back(g.dot(a, b));
    }
  }
  return g.sum(dots);
}

int ipnn(Graph& g, const std::vector<int>& e) {
  std::vector<int> parts;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      parts.push_back(g.dot(e[i], e[j]));
    }
  }
  for (int x : e) parts.push_back(x);
  return g.concat(parts);
}

int dnn_concat(Graph& g, const std::vector<int>& e) { return g.concat(e); }

int dcnv2(Graph& g, const std::vector<int>& e,
          const std::vector<std::pair<int, int>>& layer_slots) {
  const int x0 = g.concat(e);
  int x = x0;
  for (const auto& [w_slot, b_slot] : layer_slots) {
    const int y = g.affine(w_slot, b_slot, x);
    const int t = g.mul(x0, y);
    x = g.sum({t, x});
  }
  return x;
}

}  // namespace interactions

std::string Model::slot_suffix(const ModelSpec& spec, int m) {
  return spec.sets == 1 ? "" : ".m" + std::to_string(m);
}

Model::Model(const FieldSchema& schema, const ModelSpec& spec, std::uint64_t seed)
    : schema_(schema), spec_(spec), seed_(seed), graph_(&store_) {
  validate_model_spec(spec_, schema_);
  build();
}

int Model::interaction_output_width() const {
  const int n = schema_.n();
  const int k = spec_.embedding_size;
  switch (spec_.interaction) {
    case Interaction::Fm:
    case Interaction::FwFm:
    case Interaction::Ffm:
      return 1;
    case Interaction::DnnConcat:
    case Interaction::Dcnv2:
      return n * k;
    case Interaction::Ipnn:
      return n * (n - 1) / 2 + n * k;
  }
  return 0;
}

void Model::build() {
  const int n = schema_.n();
  const int k = spec_.embedding_size;
  const int m_sets = spec_.sets;
  const int param_sets = spec_.me_shared_interaction ? 1 : m_sets;
  const bool proj = spec_.nonlinear_projection_resolved();
  const int iw = interaction_output_width();

  emb_slots_.assign(m_sets, {});
  for (int m = 0; m < m_sets; ++m) {
    for (int i = 0; i < n; ++i) {
      emb_slots_[m].push_back(store_.add_slot(
          "E_" + std::to_string(i) + slot_suffix(spec_, m),
          random_embedding_table(schema_.fields[i].cardinality, k,
                                 spec_.init_scale, derive_seed(seed_, "emb", m, i)),
          /*is_embedding=*/true));
    }
  }

  cross_slots_.assign(param_sets, {});
  lambda_slots_.assign(param_sets, -1);
  std::vector<int> fwfm_slots(param_sets, -1);
  std::vector<std::pair<int, int>> proj_slots(param_sets, {-1, -1});
  for (int pm = 0; pm < param_sets; ++pm) {
    const std::string sfx = slot_suffix(spec_, pm);
    if (spec_.interaction == Interaction::Dcnv2) {
      for (int l = 0; l < spec_.cross_layers; ++l) {
        const int w = store_.add_slot(
            "cross.W" + std::to_string(l) + sfx,
            glorot_normal(n * k, n * k,
                          derive_seed(seed_, "cross.W", pm, l)));
        const int b = store_.add_slot("cross.b" + std::to_string(l) + sfx,
                                      Matrix(1, n * k));
        cross_slots_[pm].push_back({w, b});
      }
      if (spec_.unitary_reg_weight > 0.0) {
        Matrix lam(n, n);
        lam.fill(1.0);
        lambda_slots_[pm] = store_.add_slot("ureg.lambda" + sfx, std::move(lam));
      }
    } else if (spec_.interaction == Interaction::FwFm) {
      Matrix r(1, n * (n - 1) / 2);
      r.fill(1.0);
      fwfm_slots[pm] = store_.add_slot("fwfm.r" + sfx, std::move(r));
    }
    if (proj) {
      proj_slots[pm] = {
          store_.add_slot("proj.W" + sfx,
                          glorot_normal(iw, iw, derive_seed(seed_, "proj.W", pm))),
          store_.add_slot("proj.b" + sfx, Matrix(1, iw))};
    }
  }

  // Head: one hidden layer shallower when the projection is on.
  std::vector<int> hidden = spec_.mlp;
  if (proj && !hidden.empty()) hidden.pop_back();
  std::vector<std::pair<int, int>> mlp_slots;
  int in_w = iw;
  for (std::size_t l = 0; l < hidden.size(); ++l) {
    mlp_slots.push_back(
        {store_.add_slot("mlp.W" + std::to_string(l),
                         glorot_normal(hidden[l], in_w,
                                       derive_seed(seed_, "mlp.W", l))),
         store_.add_slot("mlp.b" + std::to_string(l), Matrix(1, hidden[l]))});
    in_w = hidden[l];
  }
  const int out_w_slot = store_.add_slot(
      "mlp.Wout", glorot_normal(1, in_w, derive_seed(seed_, "mlp.Wout", 0)));
  const int out_b_slot = store_.add_slot("mlp.bout", Matrix(1, 1));

  std::vector<int> per_set;
  for (int m = 0; m < m_sets; ++m) {
    const int pm = spec_.me_shared_interaction ? 0 : m;
    int h = -1;
    if (spec_.interaction == Interaction::Ffm) {
      h = interactions::ffm(graph_, emb_slots_[m], k);
    } else {
      std::vector<int> e;
      for (int i = 0; i < n; ++i) e.push_back(graph_.lookup(emb_slots_[m][i], i));
      switch (spec_.interaction) {
        case Interaction::Fm:
          h = interactions::fm(graph_, e);
          break;
        case Interaction::FwFm:
          h = interactions::fwfm(graph_, e, fwfm_slots[pm]);
          break;
        case Interaction::Ipnn:
          h = interactions::ipnn(graph_, e);
          break;
        case Interaction::DnnConcat:
          h = interactions::dnn_concat(graph_, e);
          break;
        case Interaction::Dcnv2:
          h = interactions::dcnv2(graph_, e, cross_slots_[pm]);
          break;
        case Interaction::Ffm:
          break;
      }
    }
    if (proj) {
      h = graph_.relu(graph_.affine(proj_slots[pm].first, proj_slots[pm].second, h));
    }
    per_set.push_back(h);
  }

  int z = graph_.mean(per_set);
  for (const auto& [w, b] : mlp_slots) z = graph_.relu(graph_.affine(w, b, z));
  graph_.set_output(graph_.affine(out_w_slot, out_b_slot, z));
}

double Model::forward_logit(const std::vector<int>& sample) {
  if (static_cast<int>(sample.size()) != schema_.n()) {
    throw contract_error("sample has wrong field count");
  }
  graph_.forward(sample);
  return graph_.output_scalar();
}

void Model::backward(double seed) { graph_.backward(seed); }

Matrix Model::projection_block(int m, int i, int j) const {
  if (spec_.interaction != Interaction::Dcnv2) {
    throw contract_error("projection blocks exist only for dcnv2");
  }
  const int pm = spec_.me_shared_interaction ? 0 : m;
  const int k = spec_.embedding_size;
  const Matrix& w = store_.value(cross_slots_[pm][0].first);
  // W_{j->i} is the (row-block i, column-block j) slice; W_{i->j} therefore
  // lives at row-block j, column-block i.
  return block(w, static_cast<std::size_t>(j) * k, static_cast<std::size_t>(i) * k,
               k, k);
}

Matrix Model::embedding_table(int m, int i) const {
  return store_.value(emb_slots_[m][i]);
}

Matrix Model::concatenated_table(int i) const {
  Matrix out = store_.value(emb_slots_[0][i]);
  for (int m = 1; m < spec_.sets; ++m) {
    out = hcat(out, store_.value(emb_slots_[m][i]));
  }
  return out;
}

double unitary_reg_term(const Matrix& w, double lambda, Matrix* grad_w,
                        double* grad_lambda) {
  const std::size_t k = w.cols();
  if (w.rows() != k) throw shape_error("unitary_reg_term: W must be square");
  Matrix a = matmul(w.transposed(), w);
  for (std::size_t i = 0; i < k; ++i) a(i, i) -= lambda;
  double value = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) value += a.data()[i] * a.data()[i];
  if (grad_w) {
    Matrix g = matmul(w, a);
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] *= 4.0;
    *grad_w = std::move(g);
  }
  if (grad_lambda) {
    double tr = 0.0;
    for (std::size_t i = 0; i < k; ++i) tr += a(i, i);
    *grad_lambda = -2.0 * tr;
  }
  return value;
}

double Model::accumulate_unitary_reg(double weight) {
  if (spec_.interaction != Interaction::Dcnv2 || weight == 0.0) return 0.0;
  const int n = schema_.n();
  const int k = spec_.embedding_size;
  double total = 0.0;
  for (std::size_t pm = 0; pm < cross_slots_.size(); ++pm) {
    if (lambda_slots_[pm] < 0) {
      throw state_error("unitary regularizer requested but lambda slots absent");
    }
    const int w_slot = cross_slots_[pm][0].first;
    const Matrix& w = store_.value(w_slot);
    Matrix& gw = store_.grad(w_slot);
    const Matrix& lam = store_.value(lambda_slots_[pm]);
    Matrix& glam = store_.grad(lambda_slots_[pm]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t r0 = static_cast<std::size_t>(j) * k;
        const std::size_t c0 = static_cast<std::size_t>(i) * k;
        const Matrix blk = block(w, r0, c0, k, k);
        Matrix gblk;
        double gl = 0.0;
        total += unitary_reg_term(blk, lam(i, j), &gblk, &gl);
        for (int r = 0; r < k; ++r) {
          for (int c = 0; c < k; ++c) {
            gw(r0 + r, c0 + c) += weight * gblk(r, c);
          }
        }
        glam(i, j) += weight * gl;
      }
    }
  }
  return total;
}

}  // namespace clab
