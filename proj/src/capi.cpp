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

#include "collapselab.h"

#include <cstring>
#include <string>
#include <vector>

#include "error.hpp"
#include "experiment.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "svd.hpp"
#include "train.hpp"

namespace {

thread_local std::string g_last_error;

// An opaque handle is just a heap-allocated core matrix.
clab::Matrix* unwrap(clab_matrix* m) { return reinterpret_cast<clab::Matrix*>(m); }
const clab::Matrix* unwrap(const clab_matrix* m) {
  return reinterpret_cast<const clab::Matrix*>(m);
}
clab_matrix* wrap(clab::Matrix* m) { return reinterpret_cast<clab_matrix*>(m); }

template <typename Fn>
clab_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CLAB_OK;
  } catch (const clab::config_error& e) {
    g_last_error = e.what();
    return CLAB_ERROR_CONFIG;
  } catch (const clab::data_error& e) {
    g_last_error = e.what();
    return CLAB_ERROR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CLAB_ERROR_RUNTIME;
  }
}

std::vector<std::uint64_t> parse_u64_csv(const char* text, const char* what) {
  if (!text) throw clab::config_error(std::string(what) + " list is required");
  std::vector<std::uint64_t> out;
  std::string cur;
  const std::string s(text);
  auto flush = [&]() {
    if (cur.empty()) return;
    try {
      out.push_back(std::stoull(cur));
    } catch (const std::exception&) {
      throw clab::config_error(std::string(what) + ": bad integer '" + cur + "'");
    }
    cur.clear();
  };
  for (char c : s) {
    if (c == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  flush();
  if (out.empty()) throw clab::config_error(std::string(what) + " list is empty");
  return out;
}

const char* require(const char* p, const char* what) {
  if (!p) throw clab::config_error(std::string(what) + " must not be null");
  return p;
}

}  // namespace

extern "C" {

const char* clab_last_error(void) { return g_last_error.c_str(); }

const char* clab_version(void) { return "0.1.0"; }

clab_status clab_toy_run(const char* d3_csv, int steps, const char* seeds_csv,
                         int embedding_size, const char* out_dir) {
  return guarded([&]() {
    std::vector<int> d3s;
    for (std::uint64_t v : parse_u64_csv(d3_csv, "d3")) {
      d3s.push_back(static_cast<int>(v));
    }
    clab::cmd_toy(d3s, steps, parse_u64_csv(seeds_csv, "seeds"), embedding_size,
                  require(out_dir, "out_dir"));
  });
}

clab_status clab_train_run(const char* config_path) {
  return guarded([&]() { clab::cmd_train(require(config_path, "config path")); });
}

clab_status clab_train_run_json(const char* config_json) {
  return guarded(
      [&]() { clab::cmd_train_json(require(config_json, "config json")); });
}

clab_status clab_analyze_run(const char* manifest_path, const char* schema_path,
                             const char* out_dir, int split_parts) {
  return guarded([&]() {
    clab::cmd_analyze(require(manifest_path, "manifest path"),
                      require(schema_path, "schema path"),
                      require(out_dir, "out_dir"), split_parts);
  });
}

clab_status clab_sweep_run(const char* config_path, const char* const* vary,
                           size_t n_vary, const char* seeds_csv) {
  return guarded([&]() {
    std::vector<std::string> vary_list;
    for (size_t i = 0; i < n_vary; ++i) {
      vary_list.push_back(require(vary[i], "vary entry"));
    }
    clab::cmd_sweep(require(config_path, "config path"), vary_list,
                    parse_u64_csv(seeds_csv, "seeds"));
  });
}

clab_status clab_gen_data_run(const char* generator, const char* params_json,
                              const char* out_dir) {
  return guarded([&]() {
    clab::cmd_gen_data(require(generator, "generator"),
                       params_json ? params_json : "",
                       require(out_dir, "out_dir"));
  });
}

clab_matrix* clab_matrix_create(size_t rows, size_t cols, const double* row_major) {
  try {
    std::vector<double> data(row_major, row_major + rows * cols);
    auto* m = new clab::Matrix(rows, cols, std::move(data));
    if (!m->all_finite()) {
      delete m;
      throw clab::data_error("matrix contains non-finite entries");
    }
    g_last_error.clear();
    return wrap(m);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

clab_matrix* clab_matrix_load(const char* path) {
  try {
    auto* m = new clab::Matrix(clab::read_matrix_text(require(path, "path")));
    g_last_error.clear();
    return wrap(m);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

clab_status clab_matrix_save(const clab_matrix* m, const char* path) {
  return guarded([&]() {
    if (!m) throw clab::config_error("matrix handle is null");
    clab::write_matrix_text(require(path, "path"), *unwrap(m));
  });
}

void clab_matrix_free(clab_matrix* m) { delete unwrap(m); }

size_t clab_matrix_rows(const clab_matrix* m) { return m ? unwrap(m)->rows() : 0; }
size_t clab_matrix_cols(const clab_matrix* m) { return m ? unwrap(m)->cols() : 0; }
const double* clab_matrix_data(const clab_matrix* m) {
  return m ? unwrap(m)->data() : nullptr;
}

clab_status clab_information_abundance(const clab_matrix* e, double* out) {
  return guarded([&]() {
    if (!e || !out) throw clab::config_error("null argument");
    *out = clab::information_abundance(*unwrap(e));
  });
}

clab_status clab_normalized_ia(const clab_matrix* e, const char* mode, double* out) {
  return guarded([&]() {
    if (!e || !out) throw clab::config_error("null argument");
    const std::string m = require(mode, "mode");
    clab::IaNormalization norm;
    if (m == "per-size") {
      norm = clab::IaNormalization::PerSize;
    } else if (m == "per-random") {
      norm = clab::IaNormalization::PerRandom;
    } else {
      throw clab::config_error("mode must be per-size or per-random");
    }
    *out = clab::normalized_ia(*unwrap(e), norm);
  });
}

clab_status clab_diversity(const clab_matrix* a, const clab_matrix* b, double* out) {
  return guarded([&]() {
    if (!a || !b || !out) throw clab::config_error("null argument");
    *out = clab::diversity(*unwrap(a), *unwrap(b));
  });
}

clab_status clab_svd(const clab_matrix* e, clab_matrix** u, clab_matrix** sigma,
                     clab_matrix** v) {
  return guarded([&]() {
    if (!e || !u || !sigma || !v) throw clab::config_error("null argument");
    clab::SvdResult r = clab::svd(*unwrap(e));
    clab::Matrix s(1, r.sigma.size(), r.sigma);
    *u = wrap(new clab::Matrix(std::move(r.u)));
    *sigma = wrap(new clab::Matrix(std::move(s)));
    *v = wrap(new clab::Matrix(std::move(r.v)));
  });
}

clab_status clab_principal_angle_cosines(const clab_matrix* u1,
                                         const clab_matrix* u2,
                                         clab_matrix** cosines) {
  return guarded([&]() {
    if (!u1 || !u2 || !cosines) throw clab::config_error("null argument");
    std::vector<double> cos = clab::principal_angle_cosines(*unwrap(u1), *unwrap(u2));
    *cosines = wrap(new clab::Matrix(1, cos.size(), std::move(cos)));
  });
}

clab_status clab_auc(const double* scores, const int* labels, size_t n, double* out) {
  return guarded([&]() {
    if (!scores || !labels || !out) throw clab::config_error("null argument");
    *out = clab::auc(std::vector<double>(scores, scores + n),
                     std::vector<int>(labels, labels + n));
  });
}

}  // extern "C"
