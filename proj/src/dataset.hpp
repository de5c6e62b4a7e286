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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "schema.hpp"

namespace clab {

// Per-field token vocabularies for CSV ingestion. Index 0 is reserved for
// out-of-vocabulary tokens in every field.
struct Vocabulary {
  std::vector<std::map<std::string, int>> token_to_index;
  std::vector<std::vector<std::string>> index_to_token;  // [field][index], [0] = ""

  bool empty() const { return token_to_index.empty(); }
};

enum class Provenance { Toy, TwoPattern, Csv };

struct Dataset {
  FieldSchema schema;
  std::vector<std::vector<int>> rows;  // one category index per field
  std::vector<int> labels;             // {0, 1}
  Provenance provenance = Provenance::Csv;
  Vocabulary vocab;  // populated for CSV-loaded datasets

  std::size_t size() const { return rows.size(); }
};

// Appendix-style toy construction: N = 3, D1 = D2 = 100; every (x1, x2)
// pair is enumerated exactly once; x3 ~ U[0, d3) and y ~ U{0, 1} are drawn
// from independent sub-streams of the seed, so the (x1, x2, y) marginal is
// the same multiset for every d3.
Dataset gen_toy(int d3, std::uint64_t seed);

struct TwoPatternParams {
  int rows = 10000;
  std::vector<int> cardinalities;  // N >= 4 fields
  int hidden_dim = 4;
  int pairs_per_pattern = 3;
  double w1 = 1.0;
  double w2 = 1.0;
  double noise = 0.1;  // stddev of additive Gaussian noise on the logit
};

// Ground truth emitted alongside for audit: the two hidden banks, the two
// disjoint pair sets and the score standardization constants.
struct TwoPatternAudit {
  std::vector<Matrix> bank1, bank2;
  std::vector<std::pair<int, int>> pairs1, pairs2;
  double g1_mean = 0, g1_std = 1, g2_mean = 0, g2_std = 1;
};

// Labels are Bernoulli(sigmoid(w1 * g1(x) + w2 * g2(x) + noise * eps)) where
// g1, g2 are pairwise interaction scores over disjoint field-pair sets drawn
// from two independent hidden embedding banks, z-scored over the dataset.
Dataset gen_two_pattern(const TwoPatternParams& params, std::uint64_t seed,
                        TwoPatternAudit* audit = nullptr);

// CSV: UTF-8, comma-separated, header row of field names with `label` last.
// Tokens map to dense indices in first-appearance order starting at 1.
// The overload with a fixed vocabulary maps unseen tokens to index 0.
Dataset load_csv(const std::string& path);
Dataset load_csv(const std::string& path, const Vocabulary& fixed);
void export_csv(const Dataset& ds, const std::string& path);

struct SplitSpec {
  std::array<double, 3> ratios = {8, 1, 1};
  std::uint64_t seed = 0;
};

struct Splits {
  Dataset train, val, test;
};

// Seeded uniform shuffle then contiguous cuts. Datasets below 10 rows are
// rejected.
Splits split(const Dataset& ds, const SplitSpec& spec);

// Row-index minibatches after a per-epoch seeded shuffle; the final short
// batch is kept.
std::vector<std::vector<int>> batches(std::size_t n_rows, int batch_size,
                                      std::uint64_t epoch_seed);

// Seeded uniform subset without replacement of round(fraction * |ds|) rows.
// Built as a prefix of one seeded shuffle, so smaller fractions are subsets
// of larger ones under the same seed.
Dataset subsample(const Dataset& ds, double fraction, std::uint64_t seed);

}  // namespace clab
