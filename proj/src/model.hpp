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
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "matrix.hpp"
#include "schema.hpp"

namespace clab {

enum class Interaction { DnnConcat, Fm, FwFm, Ffm, Ipnn, Dcnv2 };

Interaction interaction_from_string(const std::string& s);
std::string interaction_to_string(Interaction i);
bool interaction_is_linear(Interaction i);

// One experiment's model: interaction kind, per-set embedding size K, number
// of embedding sets M (M = 1 is the single-embedding case), head shape and
// regularization flags.
struct ModelSpec {
  Interaction interaction = Interaction::Dcnv2;
  int embedding_size = 10;          // K
  int sets = 1;                     // M
  int cross_layers = 4;             // dcnv2 only
  std::vector<int> mlp = {400, 400};
  bool me_shared_interaction = false;
  double unitary_reg_weight = 0.0;
  // Affine + relu applied to each set's interaction output. Defaults to on
  // whenever M > 1; mandatory for linear interactions with M > 1, since a
  // linear multi-set model is equivalent to a single-embedding one.
  std::optional<bool> me_nonlinear_projection;
  double init_scale = 0.01;  // embedding init stddev (1.0 in toy mode)

  bool nonlinear_projection_resolved() const {
    return me_nonlinear_projection.value_or(sets > 1);
  }
};

// Rejects invalid combinations: the linear-interaction guard for M > 1,
// the FFM divisibility requirement, and nonsensical sizes.
void validate_model_spec(const ModelSpec& spec, const FieldSchema& schema);

// Independent and complete embedding sets: tables[m][i] is D_i x K.
struct EmbeddingBank {
  std::vector<std::vector<Matrix>> tables;
};

// Each table is filled i.i.d. normal(0, init_scale^2); every (m, i) pair
// draws from its own stream derived from the master seed.
EmbeddingBank init_embeddings(const FieldSchema& schema, const ModelSpec& spec,
                              std::uint64_t seed);

// Graph-level interaction builders over already-looked-up embedding buffers.
// Kept as free functions so tests can assemble arbitrary compositions.
namespace interactions {

// Sum of all pairwise dot products.
int fm(Graph& g, const std::vector<int>& e);

// Field-weighted dots: r_slot is a 1 x N(N-1)/2 slot, pairs in (i<j)
// lexicographic order.
int fwfm(Graph& g, const std::vector<int>& e, int r_slot);

// Field-aware slices: embedding i is split into N-1 sub-ranges of width
// K/(N-1) addressed by target field (ascending j, skipping i); pair (i, j)
// dots slice i->j with slice j->i. Lookups happen inside, so this builder
// takes slots and the field binding rather than buffers.
int ffm(Graph& g, const std::vector<int>& emb_slots, int k);

// All pairwise inner products in (i<j) order concatenated with the raw
// embedding vectors.
int ipnn(Graph& g, const std::vector<int>& e);

// Concatenation in field order.
int dnn_concat(Graph& g, const std::vector<int>& e);

// Stacked cross layers x_{l+1} = x0 * (W_l x_l + b_l) + x_l (elementwise
// product), starting from x0 = concat(e).
int dcnv2(Graph& g, const std::vector<int>& e,
          const std::vector<std::pair<int, int>>& layer_slots);

}  // namespace interactions

// A trainable model: parameter store plus a static forward graph. The slot
// naming convention is the checkpoint contract:
//   E_{i}            embedding table of field i      (suffix ".m{m}" when M > 1)
//   cross.W{l} / cross.b{l}   dcnv2 cross layers     (same suffix rule)
//   proj.W / proj.b  non-linear projection           (same suffix rule)
//   fwfm.r           pair weights                    (same suffix rule)
//   ureg.lambda      unitary-regularizer scales, N x N (same suffix rule)
//   mlp.W{l} / mlp.b{l}       head layers (shared across sets)
class Model {
 public:
  Model(const FieldSchema& schema, const ModelSpec& spec, std::uint64_t seed);

  double forward_logit(const std::vector<int>& sample);
  void backward(double seed);

  ParamStore& store() { return store_; }
  const ParamStore& store() const { return store_; }
  const FieldSchema& schema() const { return schema_; }
  const ModelSpec& spec() const { return spec_; }

  int embedding_slot(int m, int i) const { return emb_slots_[m][i]; }
  // K x K block W_{i->j} of the first cross layer of set m (dcnv2 only):
  // rows j*K..j*K+K, cols i*K..i*K+K of cross.W0.
  Matrix projection_block(int m, int i, int j) const;
  bool has_projection_blocks() const { return spec_.interaction == Interaction::Dcnv2; }

  Matrix embedding_table(int m, int i) const;
  // Sets of field i concatenated column-wise: the overall embedding.
  Matrix concatenated_table(int i) const;

  // Adds weight * d(l_reg)/d(param) into the gradient accumulators and
  // returns l_reg itself: sum over sets and field pairs of
  // ||W_{i->j}^T W_{i->j} - lambda_{ij} I||_F^2 on the first cross layer.
  double accumulate_unitary_reg(double weight);

  static std::string slot_suffix(const ModelSpec& spec, int m);

 private:
  void build();
  int interaction_output_width() const;

  FieldSchema schema_;
  ModelSpec spec_;
  std::uint64_t seed_;
  ParamStore store_;
  Graph graph_;
  std::vector<std::vector<int>> emb_slots_;           // [m][i]
  std::vector<std::vector<std::pair<int, int>>> cross_slots_;  // [m][l] -> (W, b)
  std::vector<int> lambda_slots_;                     // [m], -1 when absent
};

// Value and gradients of one unitary-regularizer term
// ||W^T W - lambda I||_F^2. grad_w/grad_lambda may be null.
double unitary_reg_term(const Matrix& w, double lambda, Matrix* grad_w,
                        double* grad_lambda);

}  // namespace clab
