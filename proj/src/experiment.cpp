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

#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "io_util.hpp"
#include "rng.hpp"

namespace clab {

namespace {

std::string fmt_value(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) throw contract_error("median of empty vector");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Strict section reader: every key in the JSON object must be consumed,
// otherwise the unknown key is reported with its full path.
class Section {
 public:
  Section(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw config_error(path_ + " must be a JSON object");
  }

  ~Section() = default;

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (!seen_.count(key)) {
        throw config_error("unknown key '" + path_ + "." + key + "'");
      }
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <typename T>
  void get(const char* key, T* out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      *out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw config_error("bad value for '" + path_ + "." + key + "': " + e.what());
    }
  }

  void get_optional_bool(const char* key, std::optional<bool>* out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    if (!j_.at(key).is_boolean()) {
      throw config_error("'" + path_ + "." + key + "' must be a boolean or null");
    }
    *out = j_.at(key).get<bool>();
  }

  const ordered_json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const ordered_json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const ordered_json& j) {
  ExperimentConfig cfg;
  Section top(j, "config");

  if (top.has("data")) {
    Section s(j.at("data"), "data");
    s.get("source", &cfg.data.source);
    s.get("csv_path", &cfg.data.csv_path);
    s.get("rows", &cfg.data.rows);
    s.get("cardinalities", &cfg.data.cardinalities);
    s.get("hidden_dim", &cfg.data.hidden_dim);
    s.get("pairs_per_pattern", &cfg.data.pairs_per_pattern);
    s.get("w1", &cfg.data.w1);
    s.get("w2", &cfg.data.w2);
    s.get("noise", &cfg.data.noise);
    s.get("d3", &cfg.data.d3);
    s.get("seed", &cfg.data.seed);
    s.get("fraction", &cfg.data.fraction);
    s.get("fraction_seed", &cfg.data.fraction_seed);
    s.get("split_ratios", &cfg.data.split_ratios);
    s.get("split_seed", &cfg.data.split_seed);
    s.finish();
  }
  if (top.has("model")) {
    Section s(j.at("model"), "model");
    std::string inter = interaction_to_string(cfg.model.interaction);
    s.get("interaction", &inter);
    cfg.model.interaction = interaction_from_string(inter);
    s.get("embedding_size", &cfg.model.embedding_size);
    s.get("embedding_sets", &cfg.model.sets);
    s.get("cross_layers", &cfg.model.cross_layers);
    s.get("mlp", &cfg.model.mlp);
    s.get("me_shared_interaction", &cfg.model.me_shared_interaction);
    s.get_optional_bool("me_nonlinear_projection", &cfg.model.me_nonlinear_projection);
    s.get("unitary_reg_weight", &cfg.model.unitary_reg_weight);
    s.get("init_scale", &cfg.model.init_scale);
    s.finish();
  }
  if (top.has("train")) {
    Section s(j.at("train"), "train");
    std::string opt = "adam";
    s.get("optimizer", &opt);
    if (opt == "adam") {
      cfg.train.optimizer = TrainConfig::Optimizer::Adam;
    } else if (opt == "sgd_full") {
      cfg.train.optimizer = TrainConfig::Optimizer::SgdFull;
    } else {
      throw config_error("train.optimizer must be 'adam' or 'sgd_full'");
    }
    s.get("lr", &cfg.train.lr);
    s.get("weight_decay", &cfg.train.weight_decay);
    s.get("decay_exempt_embeddings", &cfg.train.decay_exempt_embeddings);
    s.get("beta1", &cfg.train.beta1);
    s.get("beta2", &cfg.train.beta2);
    s.get("eps", &cfg.train.eps);
    s.get("batch_size", &cfg.train.batch_size);
    s.get("max_epochs", &cfg.train.max_epochs);
    s.get("patience", &cfg.train.patience);
    s.get("metric_every", &cfg.train.metric_every);
    s.get("seed", &cfg.train.seed);
    s.get("spill_best_to_disk", &cfg.train.spill_best_to_disk);
    s.finish();
  }
  if (top.has("analysis")) {
    Section s(j.at("analysis"), "analysis");
    s.get("collapse_report", &cfg.analysis.collapse_report);
    s.get("checkpoint", &cfg.analysis.checkpoint);
    s.get("split_parts", &cfg.analysis.split_parts);
    s.get("grid_exclude_diagonal", &cfg.analysis.grid_exclude_diagonal);
    s.finish();
  }
  {
    // reject unknown top-level sections
    Section s(j, "config");
    ordered_json sink;
    s.get("data", &sink);
    s.get("model", &sink);
    s.get("train", &sink);
    s.get("analysis", &sink);
    s.get("output_dir", &cfg.output_dir);
    s.finish();
  }

  cfg.train.validate();
  if (cfg.data.fraction <= 0.0 || cfg.data.fraction > 1.0) {
    throw config_error("data.fraction must be in (0, 1]");
  }
  if (cfg.analysis.split_parts < 1) {
    throw config_error("analysis.split_parts must be >= 1");
  }
  if (cfg.data.source != "toy" && cfg.data.source != "two-pattern" &&
      cfg.data.source != "csv") {
    throw config_error("data.source must be toy, two-pattern or csv");
  }
  if (cfg.data.source == "csv" && cfg.data.csv_path.empty()) {
    throw config_error("data.csv_path is required when data.source is csv");
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_json(read_json_file(path));
}

ordered_json ExperimentConfig::echo() const {
  ordered_json j;
  j["data"] = {{"source", data.source},
               {"csv_path", data.csv_path},
               {"rows", data.rows},
               {"cardinalities", data.cardinalities},
               {"hidden_dim", data.hidden_dim},
               {"pairs_per_pattern", data.pairs_per_pattern},
               {"w1", data.w1},
               {"w2", data.w2},
               {"noise", data.noise},
               {"d3", data.d3},
               {"seed", data.seed},
               {"fraction", data.fraction},
               {"fraction_seed", data.fraction_seed},
               {"split_ratios", data.split_ratios},
               {"split_seed", data.split_seed}};
  j["model"] = {{"interaction", interaction_to_string(model.interaction)},
                {"embedding_size", model.embedding_size},
                {"embedding_sets", model.sets},
                {"cross_layers", model.cross_layers},
                {"mlp", model.mlp},
                {"me_shared_interaction", model.me_shared_interaction},
                {"me_nonlinear_projection", model.nonlinear_projection_resolved()},
                {"unitary_reg_weight", model.unitary_reg_weight},
                {"init_scale", model.init_scale}};
  j["train"] = {{"optimizer",
                 train.optimizer == TrainConfig::Optimizer::Adam ? "adam" : "sgd_full"},
                {"lr", train.lr},
                {"weight_decay", train.weight_decay},
                {"decay_exempt_embeddings", train.decay_exempt_embeddings},
                {"beta1", train.beta1},
                {"beta2", train.beta2},
                {"eps", train.eps},
                {"batch_size", train.batch_size},
                {"max_epochs", train.max_epochs},
                {"patience", train.patience},
                {"metric_every", train.metric_every},
                {"seed", train.seed},
                {"spill_best_to_disk", train.spill_best_to_disk}};
  j["analysis"] = {{"collapse_report", analysis.collapse_report},
                   {"checkpoint", analysis.checkpoint},
                   {"split_parts", analysis.split_parts},
                   {"grid_exclude_diagonal", analysis.grid_exclude_diagonal}};
  j["output_dir"] = output_dir;
  return j;
}

Dataset build_dataset(const DataConfig& cfg, TwoPatternAudit* audit) {
  Dataset ds;
  if (cfg.source == "toy") {
    ds = gen_toy(cfg.d3, cfg.seed);
  } else if (cfg.source == "two-pattern") {
    TwoPatternParams p;
    p.rows = cfg.rows;
    p.cardinalities = cfg.cardinalities;
    p.hidden_dim = cfg.hidden_dim;
    p.pairs_per_pattern = cfg.pairs_per_pattern;
    p.w1 = cfg.w1;
    p.w2 = cfg.w2;
    p.noise = cfg.noise;
    ds = gen_two_pattern(p, cfg.seed, audit);
  } else if (cfg.source == "csv") {
    ds = load_csv(cfg.csv_path);
  } else {
    throw config_error("unknown data source: " + cfg.source);
  }
  if (cfg.fraction < 1.0) {
    ds = subsample(ds, cfg.fraction, cfg.fraction_seed);
  }
  return ds;
}

RunOutputs run_experiment(const ExperimentConfig& cfg) {
  RunOutputs out;
  out.config = cfg;

  const Dataset ds = build_dataset(cfg.data);
  validate_model_spec(cfg.model, ds.schema);
  const Splits splits = split(ds, SplitSpec{cfg.data.split_ratios, cfg.data.split_seed});

  Model model(ds.schema, cfg.model, derive_seed(cfg.train.seed, "model-init"));
  TrainConfig tcfg = cfg.train;
  if (tcfg.spill_best_to_disk) tcfg.spill_dir = cfg.output_dir;
  out.record = train(model, splits, tcfg);

  const AnalysisInputs inputs = analysis_inputs_from_model(model);
  out.report = build_collapse_report(inputs, out.record.ia_trajectory,
                                     cfg.analysis.split_parts,
                                     cfg.analysis.grid_exclude_diagonal);
  double acc = 0.0;
  for (double v : out.report.ia_per_field) acc += v;
  out.mean_ia = acc / static_cast<double>(out.report.ia_per_field.size());

  if (!cfg.output_dir.empty()) {
    ensure_dir(cfg.output_dir);
    const ordered_json echo = cfg.echo();
    write_json(cfg.output_dir + "/run_record.json",
               run_record_json(out.record, tcfg, echo, cfg.train.seed));
    if (cfg.analysis.collapse_report) {
      write_json(cfg.output_dir + "/collapse_report.json",
                 collapse_report_json(out.report, echo, cfg.train.seed));
      write_report_csvs(out.report, cfg.output_dir);
    }
    if (cfg.analysis.checkpoint) {
      write_checkpoint(model, cfg.output_dir + "/checkpoint",
                       model.store().step_count());
    }
  }
  return out;
}

void cmd_train(const std::string& config_path) {
  run_experiment(ExperimentConfig::from_file(config_path));
}

void cmd_train_json(const std::string& config_json_text) {
  run_experiment(ExperimentConfig::from_json(
      parse_json_text(config_json_text, "config")));
}

void cmd_toy(const std::vector<int>& d3_values, int steps,
             const std::vector<std::uint64_t>& seeds, int embedding_size,
             const std::string& out_dir) {
  if (d3_values.empty()) throw config_error("toy: need at least one d3 value");
  for (int d3 : d3_values) {
    if (d3 < 1) throw config_error("toy: d3 values must be >= 1");
  }
  if (steps < 1) throw config_error("toy: steps must be >= 1");
  if (seeds.empty()) throw config_error("toy: need at least one seed");
  if (out_dir.empty()) throw config_error("toy: output directory required");
  ensure_dir(out_dir);

  ordered_json summary;
  summary["command"] = "toy";
  summary["steps"] = steps;
  summary["embedding_size"] = embedding_size;
  summary["seeds"] = seeds;
  summary["d3_values"] = d3_values;
  ordered_json results = ordered_json::object();

  for (int d3 : d3_values) {
    std::vector<double> finals, initials;
    for (std::uint64_t seed : seeds) {
      const ToyResult r = run_toy(d3, steps, embedding_size, seed);
      std::string csv = "step,field,ia\n";
      for (const auto& [step, ia] : r.trajectory) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", ia);
        csv += std::to_string(step) + ",f0," + buf + "\n";
      }
      atomic_write_text(out_dir + "/toy_d3" + std::to_string(d3) + "_seed" +
                            std::to_string(seed) + ".csv",
                        csv);
      finals.push_back(r.final_ia);
      initials.push_back(r.initial_ia);
    }
    ordered_json entry;
    entry["final_ia_per_seed"] = finals;
    entry["initial_ia_per_seed"] = initials;
    entry["median_final_ia"] = median(finals);
    entry["median_initial_ia"] = median(initials);
    results[std::to_string(d3)] = std::move(entry);
  }
  summary["results"] = std::move(results);
  write_json(out_dir + "/toy_summary.json", summary);
}

void cmd_analyze(const std::string& manifest_path, const std::string& schema_path,
                 const std::string& out_dir, int split_parts) {
  if (out_dir.empty()) throw config_error("analyze: output directory required");
  const LoadedCheckpoint ckpt = read_checkpoint(manifest_path);
  const FieldSchema schema = read_schema_json(schema_path);
  const AnalysisInputs inputs = analysis_inputs_from_checkpoint(ckpt, schema);
  const CollapseReportData report =
      build_collapse_report(inputs, {}, split_parts, false);

  ordered_json echo;
  echo["command"] = "analyze";
  echo["checkpoint"] = manifest_path;
  echo["schema"] = schema_path;
  echo["split_parts"] = split_parts;
  ensure_dir(out_dir);
  write_json(out_dir + "/collapse_report.json",
             collapse_report_json(report, echo, 0));
  write_report_csvs(report, out_dir);
}

namespace {

struct VaryKey {
  std::string name;  // canonical short name for the CSV header
  std::function<void(ExperimentConfig&, double)> apply;
};

VaryKey resolve_vary_key(const std::string& key) {
  if (key == "K" || key == "k" || key == "model.embedding_size") {
    return {"embedding_size", [](ExperimentConfig& c, double v) {
              c.model.embedding_size = static_cast<int>(v);
            }};
  }
  if (key == "M" || key == "m" || key == "model.embedding_sets") {
    return {"embedding_sets",
            [](ExperimentConfig& c, double v) { c.model.sets = static_cast<int>(v); }};
  }
  if (key == "fraction" || key == "data.fraction") {
    return {"fraction",
            [](ExperimentConfig& c, double v) { c.data.fraction = v; }};
  }
  if (key == "unitary_reg_weight" || key == "model.unitary_reg_weight") {
    return {"unitary_reg_weight",
            [](ExperimentConfig& c, double v) { c.model.unitary_reg_weight = v; }};
  }
  throw config_error("sweep: unsupported vary key '" + key +
                     "' (supported: K, M, fraction, unitary_reg_weight)");
}

std::vector<double> parse_value_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    try {
      std::size_t pos = 0;
      const double v = std::stod(cur, &pos);
      if (pos != cur.size()) throw std::invalid_argument(cur);
      out.push_back(v);
    } catch (const std::exception&) {
      throw config_error("sweep: non-numeric value '" + cur + "' for key " + key);
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  if (out.empty()) throw config_error("sweep: empty value list for key " + key);
  return out;
}

}  // namespace

int worker_pool_size(std::size_t n_jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COLLAPSE_LAB_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw config_error("COLLAPSE_LAB_THREADS is not an integer");
    }
  }
  n = std::max(1, n);
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(1, n_jobs)));
}

void cmd_sweep(const std::string& config_path,
               const std::vector<std::string>& vary,
               const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw config_error("sweep: seed list must not be empty");
  const ExperimentConfig base = ExperimentConfig::from_file(config_path);
  if (base.output_dir.empty()) {
    throw config_error("sweep: base config needs an output_dir");
  }

  std::vector<VaryKey> keys;
  std::vector<std::vector<double>> values;
  for (const std::string& spec : vary) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw config_error("sweep: vary entry must look like key=v1,v2 (got '" +
                         spec + "')");
    }
    keys.push_back(resolve_vary_key(spec.substr(0, eq)));
    values.push_back(parse_value_list(spec.substr(eq + 1), spec.substr(0, eq)));
  }

  // cartesian product of value lists, first key slowest
  std::vector<std::vector<double>> cells;
  {
    std::vector<double> cur(keys.size());
    std::function<void(std::size_t)> rec = [&](std::size_t d) {
      if (d == keys.size()) {
        cells.push_back(cur);
        return;
      }
      for (double v : values[d]) {
        cur[d] = v;
        rec(d + 1);
      }
    };
    rec(0);
  }

  struct Job {
    std::size_t cell;
    std::uint64_t seed;
    ExperimentConfig cfg;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::string cell_name;
    for (std::size_t d = 0; d < keys.size(); ++d) {
      if (d) cell_name += "_";
      cell_name += keys[d].name + fmt_value(cells[c][d]);
    }
    if (cell_name.empty()) cell_name = "base";
    for (std::uint64_t seed : seeds) {
      ExperimentConfig cfg = base;
      for (std::size_t d = 0; d < keys.size(); ++d) keys[d].apply(cfg, cells[c][d]);
      cfg.train.seed = seed;
      cfg.output_dir = base.output_dir + "/cells/" + cell_name + "/seed" +
                       std::to_string(seed);
      jobs.push_back({c, seed, std::move(cfg)});
    }
  }

  struct JobResult {
    double test_auc = 0.0;
    double mean_ia = 0.0;
  };
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  const int n_workers = worker_pool_size(jobs.size());
  std::vector<std::thread> workers;
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        try {
          const RunOutputs out = run_experiment(jobs[i].cfg);
          results[i] = {out.record.test_auc, out.mean_ia};
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::string raw;
  for (const VaryKey& k : keys) raw += k.name + ",";
  raw += "seed,test_auc,mean_ia\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (std::size_t d = 0; d < keys.size(); ++d) {
      raw += fmt_value(cells[jobs[i].cell][d]) + ",";
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%llu,%.17g,%.17g\n",
                  static_cast<unsigned long long>(jobs[i].seed),
                  results[i].test_auc, results[i].mean_ia);
    raw += buf;
  }
  atomic_write_text(base.output_dir + "/sweep_raw.csv", raw);

  std::string summary;
  for (const VaryKey& k : keys) summary += k.name + ",";
  summary += "seeds,median_test_auc,median_mean_ia\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> aucs, ias;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].cell == c) {
        aucs.push_back(results[i].test_auc);
        ias.push_back(results[i].mean_ia);
      }
    }
    for (std::size_t d = 0; d < keys.size(); ++d) {
      summary += fmt_value(cells[c][d]) + ",";
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", aucs.size(),
                  median(aucs), median(ias));
    summary += buf;
  }
  atomic_write_text(base.output_dir + "/sweep_summary.csv", summary);
}

void cmd_gen_data(const std::string& generator, const std::string& params_json,
                  const std::string& out_dir) {
  if (out_dir.empty()) throw config_error("gen-data: output directory required");
  const ordered_json params =
      params_json.empty() ? ordered_json::object()
                          : parse_json_text(params_json, "gen-data params");
  ensure_dir(out_dir);

  if (generator == "toy") {
    Section s(params, "params");
    int d3 = 3;
    std::uint64_t seed = 0;
    s.get("d3", &d3);
    s.get("seed", &seed);
    s.finish();
    const Dataset ds = gen_toy(d3, seed);
    export_csv(ds, out_dir + "/data.csv");
    ordered_json manifest;
    manifest["generator"] = "toy";
    manifest["d3"] = d3;
    manifest["seed"] = seed;
    manifest["rows"] = ds.size();
    write_json(out_dir + "/manifest.json", manifest);
    return;
  }
  if (generator == "two-pattern") {
    Section s(params, "params");
    TwoPatternParams p;
    std::uint64_t seed = 0;
    p.cardinalities = {20, 20, 20, 20};
    s.get("rows", &p.rows);
    s.get("cardinalities", &p.cardinalities);
    s.get("hidden_dim", &p.hidden_dim);
    s.get("pairs_per_pattern", &p.pairs_per_pattern);
    s.get("w1", &p.w1);
    s.get("w2", &p.w2);
    s.get("noise", &p.noise);
    s.get("seed", &seed);
    s.finish();
    TwoPatternAudit audit;
    const Dataset ds = gen_two_pattern(p, seed, &audit);
    export_csv(ds, out_dir + "/data.csv");

    ordered_json manifest;
    manifest["generator"] = "two-pattern";
    manifest["rows"] = p.rows;
    manifest["cardinalities"] = p.cardinalities;
    manifest["hidden_dim"] = p.hidden_dim;
    manifest["pairs_per_pattern"] = p.pairs_per_pattern;
    manifest["w1"] = p.w1;
    manifest["w2"] = p.w2;
    manifest["noise"] = p.noise;
    manifest["seed"] = seed;
    ordered_json pairs1 = ordered_json::array(), pairs2 = ordered_json::array();
    for (const auto& [i, j] : audit.pairs1) pairs1.push_back({i, j});
    for (const auto& [i, j] : audit.pairs2) pairs2.push_back({i, j});
    manifest["pairs1"] = std::move(pairs1);
    manifest["pairs2"] = std::move(pairs2);
    manifest["g1_mean"] = audit.g1_mean;
    manifest["g1_std"] = audit.g1_std;
    manifest["g2_mean"] = audit.g2_mean;
    manifest["g2_std"] = audit.g2_std;
    ordered_json bank_files = ordered_json::array();
    for (std::size_t i = 0; i < audit.bank1.size(); ++i) {
      const std::string f1 = "bank1_f" + std::to_string(i) + ".txt";
      const std::string f2 = "bank2_f" + std::to_string(i) + ".txt";
      write_matrix_text(out_dir + "/" + f1, audit.bank1[i]);
      write_matrix_text(out_dir + "/" + f2, audit.bank2[i]);
      bank_files.push_back(f1);
      bank_files.push_back(f2);
    }
    manifest["bank_files"] = std::move(bank_files);
    write_json(out_dir + "/manifest.json", manifest);
    return;
  }
  throw config_error("gen-data: unknown generator '" + generator +
                     "' (use toy or two-pattern)");
}

}  // namespace clab
