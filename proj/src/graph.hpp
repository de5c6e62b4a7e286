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
#include <map>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace clab {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  bool exempt_embeddings = false;  // skip decay on embedding slots
};

// Named parameter slots, each carrying a value, a gradient accumulator and
// Adam moments of the same shape, plus one shared step counter.
class ParamStore {
 public:
  int add_slot(const std::string& name, Matrix value, bool is_embedding = false);
  int find(const std::string& name) const;  // -1 when absent
  int slot_count() const { return static_cast<int>(slots_.size()); }

  Matrix& value(int id) { return slots_[id].value; }
  const Matrix& value(int id) const { return slots_[id].value; }
  Matrix& grad(int id) { return slots_[id].grad; }
  const Matrix& grad(int id) const { return slots_[id].grad; }
  const std::string& name(int id) const { return slots_[id].name; }
  bool is_embedding(int id) const { return slots_[id].is_embedding; }

  void zero_grads();

  // Standard Adam with bias correction; weight decay is added to the
  // gradient (L2 style) before the moment update. Raises numeric_error
  // naming the slot when a gradient is non-finite.
  void adam_step(const AdamConfig& cfg);

  // theta <- theta - lr * grad on every slot.
  void sgd_full_batch_step(double lr);

  long step_count() const { return step_; }

  std::vector<Matrix> snapshot_values() const;
  void restore_values(const std::vector<Matrix>& values);

 private:
  struct Slot {
    std::string name;
    Matrix value, grad, m, v;
    bool is_embedding = false;
  };
  std::vector<Slot> slots_;
  std::map<std::string, int> by_name_;
  long step_ = 0;
};

// Static computation graph over a ParamStore, built once per model and then
// replayed: forward(sample) recomputes every buffer in registration order,
// backward(seed) traverses the same records in exact reverse order and
// accumulates parameter gradients. Buffers are row vectors.
//
// Primitive set: embedding_lookup, matmul_affine (Wx+b), relu,
// elementwise_mul, dot, sum, mean, concat, scalar_scale. Lookups may gather
// a column range of the row, which is how field-aware sub-embedding slices
// are addressed.
class Graph {
 public:
  explicit Graph(ParamStore* store) : store_(store) {}

  // Gathers row sample[field] of the slot at forward time.
  int lookup(int slot, int field, int col_off = 0, int width = -1);
  // Gathers a fixed row (used for scalar parameters and frozen inputs).
  int lookup_fixed(int slot, int row, int col_off = 0, int width = -1);

  // y = W x + b with W: out x in, b: 1 x out.
  int affine(int w_slot, int b_slot, int x);
  int relu(int x);
  int mul(int a, int b);
  int dot(int a, int b);
  int sum(const std::vector<int>& xs);
  int mean(const std::vector<int>& xs);
  int concat(const std::vector<int>& xs);
  int scale(int x, double c);

  int width(int buf) const { return nodes_[buf].out_w; }
  const std::vector<double>& buffer(int buf) const { return vals_[buf]; }

  void set_output(int buf) { output_ = buf; }
  int output() const { return output_; }

  void forward(const std::vector<int>& sample);
  double output_scalar() const;
  // Accumulates d(seed * output)/d(param) into the store. State error when
  // called before forward.
  void backward(double seed);

 private:
  enum class Op { Lookup, Affine, Relu, Mul, Dot, Sum, Mean, Concat, Scale };

  struct Node {
    Op op;
    int a = -1, b = -1;
    std::vector<int> list;
    int slot = -1, w_slot = -1, b_slot = -1;
    int field = -1, fixed_row = -1;
    int col_off = 0;
    double c = 0.0;
    int out_w = 0;
    int cur_row = -1;  // resolved row of the last forward
  };

  int push(Node n);

  ParamStore* store_;
  std::vector<Node> nodes_;
  std::vector<std::vector<double>> vals_;
  std::vector<std::vector<double>> grads_;
  int output_ = -1;
  bool forward_done_ = false;
};

double sigmoid(double z);

struct BceResult {
  double loss;
  double grad;  // d loss / d logit = sigmoid(z) - y
};

// Numerically stable binary cross entropy on a logit:
// max(z,0) - z*y + log(1 + exp(-|z|)).
BceResult bce_loss(double logit, int label);

}  // namespace clab
