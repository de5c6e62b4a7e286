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

// collapse-lab CLI. Argument handling lives here; everything else goes
// through the shared library's C API. Exit codes: 0 success, 2 usage or
// config problems, 3 runtime training failures.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collapselab.h"

namespace {

int report(clab_status status) {
  if (status != CLAB_OK) {
    std::fprintf(stderr, "error: %s\n", clab_last_error());
  }
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training and collapse diagnostics for small multi-field "
               "categorical recommendation models"};
  app.require_subcommand(1);

  // toy
  std::string toy_d3 = "3,100";
  int toy_steps = 5000;
  std::string toy_seeds = "0,1,2,3,4";
  int toy_k = 10;
  std::string toy_out;
  CLI::App* toy = app.add_subcommand(
      "toy", "Three-field collapse-contagion experiment across d3 values");
  toy->add_option("--d3", toy_d3, "Comma-separated cardinalities of the third field");
  toy->add_option("--steps", toy_steps, "Full-batch SGD steps");
  toy->add_option("--seeds", toy_seeds, "Comma-separated seeds");
  toy->add_option("--k", toy_k, "Embedding size");
  toy->add_option("--out", toy_out, "Output directory")->required();

  // train
  std::string train_config;
  CLI::App* train = app.add_subcommand("train", "Run one training experiment");
  train->add_option("--config", train_config, "Experiment config JSON")->required();

  // analyze
  std::string an_ckpt, an_schema, an_out;
  int an_split_parts = 2;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Collapse report from a checkpoint");
  analyze->add_option("--checkpoint", an_ckpt, "Checkpoint manifest JSON")->required();
  analyze->add_option("--schema", an_schema, "Field schema JSON")->required();
  analyze->add_option("--out", an_out, "Output directory")->required();
  analyze->add_option("--split-parts", an_split_parts,
                      "Column splits for single-set diversity");

  // sweep
  std::string sweep_config, sweep_seeds;
  std::vector<std::string> sweep_vary;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Cartesian sweep over K, M, data fraction or reg weight");
  sweep->add_option("--config", sweep_config, "Base experiment config JSON")->required();
  sweep->add_option("--vary", sweep_vary, "key=v1,v2 (repeatable)");
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds")->required();

  // gen-data
  std::string gen_kind, gen_params = "{}", gen_out;
  CLI::App* gen = app.add_subcommand("gen-data", "Write a synthetic dataset");
  gen->add_option("--generator", gen_kind, "toy or two-pattern")->required();
  gen->add_option("--params", gen_params, "Generator parameters as JSON");
  gen->add_option("--out", gen_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (toy->parsed()) {
    return report(clab_toy_run(toy_d3.c_str(), toy_steps, toy_seeds.c_str(),
                               toy_k, toy_out.c_str()));
  }
  if (train->parsed()) {
    return report(clab_train_run(train_config.c_str()));
  }
  if (analyze->parsed()) {
    return report(clab_analyze_run(an_ckpt.c_str(), an_schema.c_str(),
                                   an_out.c_str(), an_split_parts));
  }
  if (sweep->parsed()) {
    std::vector<const char*> vary;
    for (const std::string& v : sweep_vary) vary.push_back(v.c_str());
    return report(clab_sweep_run(sweep_config.c_str(), vary.data(), vary.size(),
                                 sweep_seeds.c_str()));
  }
  if (gen->parsed()) {
    return report(clab_gen_data_run(gen_kind.c_str(), gen_params.c_str(),
                                    gen_out.c_str()));
  }
  return 2;
}
