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

#include "dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "graph.hpp"  // sigmoid
#include "io_util.hpp"
#include "rng.hpp"

namespace clab {

namespace {

void seeded_shuffle(std::vector<std::size_t>& idx, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_int(i);
    std::swap(idx[i - 1], idx[j]);
  }
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx,
                  std::size_t begin, std::size_t end) {
  Dataset out;
  out.schema = ds.schema;
  out.provenance = ds.provenance;
  out.vocab = ds.vocab;
  out.rows.reserve(end - begin);
  out.labels.reserve(end - begin);
  for (std::size_t p = begin; p < end; ++p) {
    out.rows.push_back(ds.rows[idx[p]]);
    out.labels.push_back(ds.labels[idx[p]]);
  }
  return out;
}

}  // namespace

Dataset gen_toy(int d3, std::uint64_t seed) {
  if (d3 < 1) throw config_error("gen_toy: d3 must be >= 1");
  Dataset ds;
  ds.provenance = Provenance::Toy;
  ds.schema = make_schema({100, 100, d3});
  Rng rng_x3(derive_seed(seed, "toy-x3"));
  Rng rng_y(derive_seed(seed, "toy-y"));
  ds.rows.reserve(100 * 100);
  for (int x1 = 0; x1 < 100; ++x1) {
    for (int x2 = 0; x2 < 100; ++x2) {
      const int x3 = static_cast<int>(rng_x3.uniform_int(static_cast<std::uint64_t>(d3)));
      ds.rows.push_back({x1, x2, x3});
      ds.labels.push_back(static_cast<int>(rng_y.uniform_int(2)));
    }
  }
  return ds;
}

Dataset gen_two_pattern(const TwoPatternParams& params, std::uint64_t seed,
                        TwoPatternAudit* audit) {
  const int n = static_cast<int>(params.cardinalities.size());
  if (n < 4) throw config_error("gen_two_pattern: needs at least 4 fields");
  if (params.rows < 1) throw config_error("gen_two_pattern: rows must be >= 1");
  if (params.hidden_dim < 1) throw config_error("gen_two_pattern: hidden_dim must be >= 1");
  if (params.pairs_per_pattern < 1) {
    throw config_error("gen_two_pattern: pairs_per_pattern must be >= 1");
  }

  Dataset ds;
  ds.provenance = Provenance::TwoPattern;
  ds.schema = make_schema(params.cardinalities);

  // Two disjoint pair sets from a seeded shuffle of all field pairs.
  std::vector<std::pair<int, int>> all_pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all_pairs.push_back({i, j});
  }
  if (2 * params.pairs_per_pattern > static_cast<int>(all_pairs.size())) {
    throw config_error("gen_two_pattern: not enough field pairs for two disjoint sets");
  }
  {
    std::vector<std::size_t> idx(all_pairs.size());
    std::iota(idx.begin(), idx.end(), 0);
    seeded_shuffle(idx, derive_seed(seed, "tp-pairs"));
    std::vector<std::pair<int, int>> shuffled;
    for (std::size_t i : idx) shuffled.push_back(all_pairs[i]);
    all_pairs = std::move(shuffled);
  }
  std::vector<std::pair<int, int>> pairs1(all_pairs.begin(),
                                          all_pairs.begin() + params.pairs_per_pattern);
  std::vector<std::pair<int, int>> pairs2(
      all_pairs.begin() + params.pairs_per_pattern,
      all_pairs.begin() + 2 * params.pairs_per_pattern);

  auto make_bank = [&](const char* tag) {
    std::vector<Matrix> bank;
    for (int i = 0; i < n; ++i) {
      Rng rng(derive_seed(seed, tag, static_cast<std::uint64_t>(i)));
      Matrix t(params.cardinalities[i], params.hidden_dim);
      const double scale = 1.0 / std::sqrt(static_cast<double>(params.hidden_dim));
      for (std::size_t q = 0; q < t.size(); ++q) t.data()[q] = scale * rng.normal();
      bank.push_back(std::move(t));
    }
    return bank;
  };
  const std::vector<Matrix> bank1 = make_bank("tp-bank1");
  const std::vector<Matrix> bank2 = make_bank("tp-bank2");

  Rng rng_x(derive_seed(seed, "tp-x"));
  ds.rows.reserve(params.rows);
  for (int r = 0; r < params.rows; ++r) {
    std::vector<int> row(n);
    for (int i = 0; i < n; ++i) {
      row[i] = static_cast<int>(
          rng_x.uniform_int(static_cast<std::uint64_t>(params.cardinalities[i])));
    }
    ds.rows.push_back(std::move(row));
  }

  auto score = [&](const std::vector<Matrix>& bank,
                   const std::vector<std::pair<int, int>>& pairs,
                   const std::vector<int>& row) {
    double s = 0.0;
    for (const auto& [i, j] : pairs) {
      const double* a = bank[i].row(row[i]);
      const double* b = bank[j].row(row[j]);
      for (int d = 0; d < params.hidden_dim; ++d) s += a[d] * b[d];
    }
    return s;
  };

  std::vector<double> g1(params.rows), g2(params.rows);
  for (int r = 0; r < params.rows; ++r) {
    g1[r] = score(bank1, pairs1, ds.rows[r]);
    g2[r] = score(bank2, pairs2, ds.rows[r]);
  }

  // z-score both pattern scores so w1/w2 weigh them on a common scale
  auto standardize = [](std::vector<double>& g, double* mean_out, double* std_out) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (double v : g) var += (v - mean) * (v - mean);
    var /= static_cast<double>(g.size());
    const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
    for (double& v : g) v = (v - mean) / sd;
    *mean_out = mean;
    *std_out = sd;
  };
  double m1, s1, m2, s2;
  standardize(g1, &m1, &s1);
  standardize(g2, &m2, &s2);

  Rng rng_label(derive_seed(seed, "tp-label"));
  ds.labels.resize(params.rows);
  for (int r = 0; r < params.rows; ++r) {
    double logit = params.w1 * g1[r] + params.w2 * g2[r];
    if (params.noise > 0.0) logit += params.noise * rng_label.normal();
    ds.labels[r] = rng_label.bernoulli(sigmoid(logit));
  }

  if (audit) {
    audit->bank1 = bank1;
    audit->bank2 = bank2;
    audit->pairs1 = pairs1;
    audit->pairs2 = pairs2;
    audit->g1_mean = m1;
    audit->g1_std = s1;
    audit->g2_mean = m2;
    audit->g2_std = s2;
  }
  return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Dataset load_csv_impl(const std::string& path, const Vocabulary* fixed) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open csv file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw data_error(path + ": empty file");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "label") {
    throw data_error(path + ": last header column must be 'label'");
  }
  const int n = static_cast<int>(header.size()) - 1;

  Dataset ds;
  ds.provenance = Provenance::Csv;
  ds.vocab.token_to_index.resize(n);
  ds.vocab.index_to_token.assign(n, {""});  // index 0 = OOV, always allocated
  if (fixed) {
    if (static_cast<int>(fixed->token_to_index.size()) != n) {
      throw data_error(path + ": vocabulary field count mismatch");
    }
    ds.vocab = *fixed;
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != n + 1) {
      throw data_error(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(n + 1) + " columns, got " +
                       std::to_string(cells.size()));
    }
    const std::string& lab = cells.back();
    if (lab != "0" && lab != "1") {
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": label must be 0 or 1, got '" + lab + "'");
    }
    std::vector<int> row(n);
    for (int i = 0; i < n; ++i) {
      auto& map = ds.vocab.token_to_index[i];
      auto it = map.find(cells[i]);
      if (it != map.end()) {
        row[i] = it->second;
      } else if (fixed) {
        row[i] = 0;  // unseen token -> reserved OOV index
      } else {
        const int idx = static_cast<int>(ds.vocab.index_to_token[i].size());
        map.emplace(cells[i], idx);
        ds.vocab.index_to_token[i].push_back(cells[i]);
        row[i] = idx;
      }
    }
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(lab == "1" ? 1 : 0);
  }

  for (int i = 0; i < n; ++i) {
    FieldSchema::Field f;
    f.name = header[i];
    f.cardinality = static_cast<int>(ds.vocab.index_to_token[i].size());
    ds.schema.fields.push_back(std::move(f));
  }
  ds.schema.validate();
  return ds;
}

}  // namespace

Dataset load_csv(const std::string& path) { return load_csv_impl(path, nullptr); }

Dataset load_csv(const std::string& path, const Vocabulary& fixed) {
  return load_csv_impl(path, &fixed);
}

void export_csv(const Dataset& ds, const std::string& path) {
  std::string out;
  for (int i = 0; i < ds.schema.n(); ++i) {
    out += ds.schema.fields[i].name;
    out += ',';
  }
  out += "label\n";
  const bool has_vocab = !ds.vocab.empty();
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    for (int i = 0; i < ds.schema.n(); ++i) {
      const int idx = ds.rows[r][i];
      if (has_vocab && idx < static_cast<int>(ds.vocab.index_to_token[i].size()) &&
          idx > 0) {
        out += ds.vocab.index_to_token[i][idx];
      } else {
        out += std::to_string(idx);
      }
      out += ',';
    }
    out += ds.labels[r] ? '1' : '0';
    out += '\n';
  }
  atomic_write_text(path, out);
}

Splits split(const Dataset& ds, const SplitSpec& spec) {
  if (ds.size() < 10) {
    throw config_error("split: dataset has fewer than 10 rows");
  }
  for (double r : spec.ratios) {
    if (r <= 0.0) throw config_error("split: ratios must be positive");
  }
  const double total = spec.ratios[0] + spec.ratios[1] + spec.ratios[2];
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), 0);
  seeded_shuffle(idx, derive_seed(spec.seed, "split"));
  const std::size_t n = ds.size();
  const std::size_t cut1 =
      static_cast<std::size_t>(std::floor(n * spec.ratios[0] / total));
  const std::size_t cut2 = static_cast<std::size_t>(
      std::floor(n * (spec.ratios[0] + spec.ratios[1]) / total));
  Splits out;
  out.train = take_rows(ds, idx, 0, cut1);
  out.val = take_rows(ds, idx, cut1, cut2);
  out.test = take_rows(ds, idx, cut2, n);
  return out;
}

std::vector<std::vector<int>> batches(std::size_t n_rows, int batch_size,
                                      std::uint64_t epoch_seed) {
  if (batch_size < 1) throw config_error("batches: batch_size must be >= 1");
  std::vector<std::size_t> idx(n_rows);
  std::iota(idx.begin(), idx.end(), 0);
  seeded_shuffle(idx, epoch_seed);
  std::vector<std::vector<int>> out;
  for (std::size_t start = 0; start < n_rows; start += batch_size) {
    const std::size_t end = std::min(n_rows, start + batch_size);
    std::vector<int> b;
    b.reserve(end - start);
    for (std::size_t p = start; p < end; ++p) b.push_back(static_cast<int>(idx[p]));
    out.push_back(std::move(b));
  }
  return out;
}

Dataset subsample(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw config_error("subsample: fraction must be in (0, 1]");
  }
  const std::size_t n = ds.size();
  const std::size_t keep =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (keep == 0) throw config_error("subsample: empty result");
  if (keep == n) return ds;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  seeded_shuffle(idx, derive_seed(seed, "subsample"));
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());  // keep original row order
  return take_rows(ds, idx, 0, keep);
}

}  // namespace clab
