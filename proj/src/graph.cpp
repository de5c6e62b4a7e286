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

#include "graph.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace clab {

int ParamStore::add_slot(const std::string& name, Matrix value, bool is_embedding) {
  if (by_name_.count(name)) {
    throw state_error("duplicate slot name: " + name);
  }
  Slot s;
  s.name = name;
  s.grad = Matrix(value.rows(), value.cols());
  s.m = Matrix(value.rows(), value.cols());
  s.v = Matrix(value.rows(), value.cols());
  s.value = std::move(value);
  s.is_embedding = is_embedding;
  slots_.push_back(std::move(s));
  const int id = static_cast<int>(slots_.size()) - 1;
  by_name_[name] = id;
  return id;
}

int ParamStore::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

void ParamStore::zero_grads() {
  for (Slot& s : slots_) s.grad.fill(0.0);
}

void ParamStore::adam_step(const AdamConfig& cfg) {
  ++step_;
  const double t = static_cast<double>(step_);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (Slot& s : slots_) {
    const bool decay = cfg.weight_decay != 0.0 &&
                       !(cfg.exempt_embeddings && s.is_embedding);
    double* theta = s.value.data();
    const double* g = s.grad.data();
    double* m = s.m.data();
    double* v = s.v.data();
    const std::size_t n = s.value.size();
    for (std::size_t i = 0; i < n; ++i) {
      double gi = g[i];
      if (!std::isfinite(gi)) {
        throw numeric_error("non-finite gradient in slot " + s.name);
      }
      if (decay) gi += cfg.weight_decay * theta[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gi;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * gi * gi;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      theta[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

void ParamStore::sgd_full_batch_step(double lr) {
  ++step_;
  for (Slot& s : slots_) {
    double* theta = s.value.data();
    const double* g = s.grad.data();
    for (std::size_t i = 0; i < s.value.size(); ++i) {
      if (!std::isfinite(g[i])) {
        throw numeric_error("non-finite gradient in slot " + s.name);
      }
      theta[i] -= lr * g[i];
    }
  }
}

std::vector<Matrix> ParamStore::snapshot_values() const {
  std::vector<Matrix> out;
  out.reserve(slots_.size());
  for (const Slot& s : slots_) out.push_back(s.value);
  return out;
}

void ParamStore::restore_values(const std::vector<Matrix>& values) {
  if (values.size() != slots_.size()) {
    throw state_error("restore_values: snapshot size mismatch");
  }
  for (std::size_t i = 0; i < values.size(); ++i) slots_[i].value = values[i];
}

int Graph::push(Node n) {
  nodes_.push_back(std::move(n));
  vals_.emplace_back(nodes_.back().out_w, 0.0);
  grads_.emplace_back(nodes_.back().out_w, 0.0);
  return static_cast<int>(nodes_.size()) - 1;
}

int Graph::lookup(int slot, int field, int col_off, int width) {
  const Matrix& t = store_->value(slot);
  const int w = width < 0 ? static_cast<int>(t.cols()) - col_off : width;
  if (col_off < 0 || w <= 0 || col_off + w > static_cast<int>(t.cols())) {
    throw shape_error("lookup: column range out of bounds for slot " +
                      store_->name(slot));
  }
  Node n;
  n.op = Op::Lookup;
  n.slot = slot;
  n.field = field;
  n.col_off = col_off;
  n.out_w = w;
  return push(std::move(n));
}

int Graph::lookup_fixed(int slot, int row, int col_off, int width) {
  const Matrix& t = store_->value(slot);
  if (row < 0 || row >= static_cast<int>(t.rows())) {
    throw shape_error("lookup_fixed: row out of range for slot " +
                      store_->name(slot));
  }
  const int id = lookup(slot, -1, col_off, width);
  nodes_[id].fixed_row = row;
  return id;
}

int Graph::affine(int w_slot, int b_slot, int x) {
  const Matrix& w = store_->value(w_slot);
  const Matrix& b = store_->value(b_slot);
  if (static_cast<int>(w.cols()) != nodes_[x].out_w) {
    throw shape_error("affine: W columns do not match input width");
  }
  if (b.rows() != 1 || b.cols() != w.rows()) {
    throw shape_error("affine: bias shape must be 1 x out");
  }
  Node n;
  n.op = Op::Affine;
  n.w_slot = w_slot;
  n.b_slot = b_slot;
  n.a = x;
  n.out_w = static_cast<int>(w.rows());
  return push(std::move(n));
}

int Graph::relu(int x) {
  Node n;
  n.op = Op::Relu;
  n.a = x;
  n.out_w = nodes_[x].out_w;
  return push(std::move(n));
}

int Graph::mul(int a, int b) {
  if (nodes_[a].out_w != nodes_[b].out_w) {
    throw shape_error("elementwise_mul: widths differ");
  }
  Node n;
  n.op = Op::Mul;
  n.a = a;
  n.b = b;
  n.out_w = nodes_[a].out_w;
  return push(std::move(n));
}

int Graph::dot(int a, int b) {
  if (nodes_[a].out_w != nodes_[b].out_w) {
    throw shape_error("dot: widths differ");
  }
  Node n;
  n.op = Op::Dot;
  n.a = a;
  n.b = b;
  n.out_w = 1;
  return push(std::move(n));
}

int Graph::sum(const std::vector<int>& xs) {
  if (xs.empty()) throw shape_error("sum: empty operand list");
  for (int x : xs) {
    if (nodes_[x].out_w != nodes_[xs[0]].out_w) {
      throw shape_error("sum: widths differ");
    }
  }
  Node n;
  n.op = Op::Sum;
  n.list = xs;
  n.out_w = nodes_[xs[0]].out_w;
  return push(std::move(n));
}

int Graph::mean(const std::vector<int>& xs) {
  const int id = sum(xs);
  nodes_[id].op = Op::Mean;
  return id;
}

int Graph::concat(const std::vector<int>& xs) {
  if (xs.empty()) throw shape_error("concat: empty operand list");
  Node n;
  n.op = Op::Concat;
  n.list = xs;
  int w = 0;
  for (int x : xs) w += nodes_[x].out_w;
  n.out_w = w;
  return push(std::move(n));
}

int Graph::scale(int x, double c) {
  Node n;
  n.op = Op::Scale;
  n.a = x;
  n.c = c;
  n.out_w = nodes_[x].out_w;
  return push(std::move(n));
}

void Graph::forward(const std::vector<int>& sample) {
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    Node& n = nodes_[id];
    std::vector<double>& out = vals_[id];
    switch (n.op) {
      case Op::Lookup: {
        int row = n.fixed_row;
        if (n.field >= 0) {
          if (n.field >= static_cast<int>(sample.size())) {
            throw contract_error("forward: sample has too few fields");
          }
          row = sample[n.field];
        }
        const Matrix& t = store_->value(n.slot);
        if (row < 0 || row >= static_cast<int>(t.rows())) {
          throw data_error("index " + std::to_string(row) +
                           " out of cardinality for slot " + store_->name(n.slot));
        }
        n.cur_row = row;
        const double* src = t.row(row) + n.col_off;
        std::copy(src, src + n.out_w, out.begin());
        break;
      }
      case Op::Affine: {
        const Matrix& w = store_->value(n.w_slot);
        const Matrix& b = store_->value(n.b_slot);
        const std::vector<double>& x = vals_[n.a];
        for (int r = 0; r < n.out_w; ++r) {
          const double* wr = w.row(r);
          double acc = b(0, r);
          for (std::size_t c = 0; c < x.size(); ++c) acc += wr[c] * x[c];
          out[r] = acc;
        }
        break;
      }
      case Op::Relu: {
        const std::vector<double>& x = vals_[n.a];
        for (int i = 0; i < n.out_w; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
        break;
      }
      case Op::Mul: {
        const std::vector<double>& a = vals_[n.a];
        const std::vector<double>& b = vals_[n.b];
        for (int i = 0; i < n.out_w; ++i) out[i] = a[i] * b[i];
        break;
      }
      case Op::Dot: {
        const std::vector<double>& a = vals_[n.a];
        const std::vector<double>& b = vals_[n.b];
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
        out[0] = acc;
        break;
      }
      case Op::Sum:
      case Op::Mean: {
        std::fill(out.begin(), out.end(), 0.0);
        for (int x : n.list) {
          const std::vector<double>& v = vals_[x];
          for (int i = 0; i < n.out_w; ++i) out[i] += v[i];
        }
        if (n.op == Op::Mean) {
          const double inv = 1.0 / static_cast<double>(n.list.size());
          for (int i = 0; i < n.out_w; ++i) out[i] *= inv;
        }
        break;
      }
      case Op::Concat: {
        int off = 0;
        for (int x : n.list) {
          const std::vector<double>& v = vals_[x];
          std::copy(v.begin(), v.end(), out.begin() + off);
          off += static_cast<int>(v.size());
        }
        break;
      }
      case Op::Scale: {
        const std::vector<double>& x = vals_[n.a];
        for (int i = 0; i < n.out_w; ++i) out[i] = n.c * x[i];
        break;
      }
    }
  }
  forward_done_ = true;
}

double Graph::output_scalar() const {
  if (output_ < 0) throw state_error("graph has no output buffer");
  if (!forward_done_) throw state_error("output read before forward");
  return vals_[output_][0];
}

void Graph::backward(double seed) {
  if (!forward_done_) {
    throw state_error("backward called before forward");
  }
  if (output_ < 0) throw state_error("graph has no output buffer");
  for (std::vector<double>& g : grads_) std::fill(g.begin(), g.end(), 0.0);
  grads_[output_][0] = seed;

  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    const Node& n = nodes_[id];
    const std::vector<double>& g = grads_[id];
    switch (n.op) {
      case Op::Lookup: {
        Matrix& gm = store_->grad(n.slot);
        double* dst = gm.row(n.cur_row) + n.col_off;
        for (int i = 0; i < n.out_w; ++i) dst[i] += g[i];
        break;
      }
      case Op::Affine: {
        const Matrix& w = store_->value(n.w_slot);
        Matrix& gw = store_->grad(n.w_slot);
        Matrix& gb = store_->grad(n.b_slot);
        const std::vector<double>& x = vals_[n.a];
        std::vector<double>& gx = grads_[n.a];
        for (int r = 0; r < n.out_w; ++r) {
          const double gr = g[r];
          if (gr == 0.0) continue;
          gb(0, r) += gr;
          const double* wr = w.row(r);
          double* gwr = gw.row(r);
          for (std::size_t c = 0; c < x.size(); ++c) {
            gwr[c] += gr * x[c];
            gx[c] += gr * wr[c];
          }
        }
        break;
      }
      case Op::Relu: {
        const std::vector<double>& x = vals_[n.a];
        std::vector<double>& gx = grads_[n.a];
        // subgradient at 0 is 0
        for (int i = 0; i < n.out_w; ++i) {
          if (x[i] > 0.0) gx[i] += g[i];
        }
        break;
      }
      case Op::Mul: {
        const std::vector<double>& a = vals_[n.a];
        const std::vector<double>& b = vals_[n.b];
        std::vector<double>& ga = grads_[n.a];
        std::vector<double>& gb = grads_[n.b];
        for (int i = 0; i < n.out_w; ++i) {
          ga[i] += g[i] * b[i];
          gb[i] += g[i] * a[i];
        }
        break;
      }
      case Op::Dot: {
        const std::vector<double>& a = vals_[n.a];
        const std::vector<double>& b = vals_[n.b];
        std::vector<double>& ga = grads_[n.a];
        std::vector<double>& gb = grads_[n.b];
        const double g0 = g[0];
        for (std::size_t i = 0; i < a.size(); ++i) {
          ga[i] += g0 * b[i];
          gb[i] += g0 * a[i];
        }
        break;
      }
      case Op::Sum: {
        for (int x : n.list) {
          std::vector<double>& gx = grads_[x];
          for (int i = 0; i < n.out_w; ++i) gx[i] += g[i];
        }
        break;
      }
      case Op::Mean: {
        const double inv = 1.0 / static_cast<double>(n.list.size());
        for (int x : n.list) {
          std::vector<double>& gx = grads_[x];
          for (int i = 0; i < n.out_w; ++i) gx[i] += g[i] * inv;
        }
        break;
      }
      case Op::Concat: {
        int off = 0;
        for (int x : n.list) {
          std::vector<double>& gx = grads_[x];
          for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[off + i];
          off += static_cast<int>(gx.size());
        }
        break;
      }
      case Op::Scale: {
        std::vector<double>& gx = grads_[n.a];
        for (int i = 0; i < n.out_w; ++i) gx[i] += n.c * g[i];
        break;
      }
    }
  }
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

BceResult bce_loss(double logit, int label) {
  const double z = logit;
  const double y = static_cast<double>(label);
  const double loss = std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::fabs(z)));
  return BceResult{loss, sigmoid(z) - y};
}

}  // namespace clab
