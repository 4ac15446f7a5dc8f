// Copyright 2026 The fedsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the federated training simulator.
//
//   fedsim run --config exp.json [--metrics out.csv] [--overlap-report o.csv]
//   fedsim partition-report --config exp.json [--out parts.json]
//   fedsim overlap-report --config exp.json [--out overlap.csv]
//   fedsim sweep --config exp.json --param alpha|gamma [--values 0.1,0.3]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedsim/config.h"
#include "fedsim/errors.h"
#include "fedsim/orchestrator.h"

namespace {

using fedsim::ExperimentConfig;

void PrintSweep(const std::string& name,
                const std::vector<fedsim::SweepResult>& results) {
  std::printf("param,value,final_test_acc,best_test_acc,cum_actual,cum_max,cum_min\n");
  for (const auto& r : results) {
    std::printf("%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", name.c_str(), r.value,
                r.final_test_acc, r.best_test_acc, r.cumulative.actual,
                r.cumulative.max, r.cumulative.min);
  }
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw fedsim::IoError("cannot open output file " + path);
  out << text;
  if (!out) throw fedsim::IoError("write failed for " + path);
}

std::vector<double> ParseValues(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) throw fedsim::ParameterError("bad sweep value '" + item + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning simulator with bandwidth-aware compression"};
  app.require_subcommand(1);

  std::string config_path;
  std::string metrics_path, overlap_path, model_path, out_path;
  std::string sweep_param = "alpha";
  bool run_sweep = false;

  auto* run = app.add_subcommand("run", "Run an experiment and write the metrics CSV");
  run->add_option("--config", config_path, "Experiment config (flat JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--metrics", metrics_path, "Metrics CSV path (stdout if unset)");
  run->add_option("--overlap-report", overlap_path, "Per-round overlap histogram CSV");
  run->add_option("--model-out", model_path, "Write the final model as JSON");
  run->add_flag("--sweep", run_sweep, "Sweep alpha over {0.01,0.03,0.1,0.3,1}");

  auto* partition = app.add_subcommand("partition-report",
                                       "Per-client class counts as JSON");
  partition->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  partition->add_option("--out", out_path, "Output path (stdout if unset)");

  auto* overlap = app.add_subcommand("overlap-report",
                                     "Per-round overlap-degree histogram CSV");
  overlap->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  overlap->add_option("--out", out_path, "Output path (stdout if unset)");

  auto* sweep = app.add_subcommand("sweep", "Grid over alpha or gamma");
  sweep->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", sweep_param, "alpha or gamma")
      ->check(CLI::IsMember({"alpha", "gamma"}));
  std::string values_csv;
  sweep->add_option("--values", values_csv, "Comma-separated values");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config = ExperimentConfig::FromFile(config_path);

    if (*run) {
      if (run_sweep) {
        PrintSweep("alpha", fedsim::RunSweep(
                                config, fedsim::SweepParam::kAlpha,
                                fedsim::DefaultSweepValues(fedsim::SweepParam::kAlpha, config)));
        return 0;
      }
      fedsim::RunOptions opts;
      opts.metrics_csv = metrics_path;
      opts.overlap_csv = overlap_path;
      opts.model_out = model_path;
      const bool to_stdout = metrics_path.empty() && config.metrics_csv.empty();
      if (to_stdout) {
        fedsim::WriteMetricsHeader(std::cout);
        opts.on_round = [](const fedsim::RoundReport& r) {
          fedsim::WriteMetricsRow(std::cout, r);
          std::cout.flush();
        };
      }
      const auto reports = fedsim::RunExperiment(config, opts);
      if (!to_stdout) {
        const auto& last = reports.back();
        std::fprintf(stderr, "%s: %d rounds, test_acc %.4f, cum_actual %.3f s\n",
                     std::string(fedsim::AlgorithmName(config.algorithm)).c_str(),
                     last.round, last.test_acc, last.cumulative.actual);
      }
      return 0;
    }

    if (*partition) {
      fedsim::Simulation sim(config);
      WriteText(out_path, fedsim::PartitionReportJson(sim) + "\n");
      return 0;
    }

    if (*overlap) {
      std::ostringstream csv;
      fedsim::WriteOverlapHeader(csv);
      fedsim::RunOptions opts;
      opts.on_round = [&csv](const fedsim::RoundReport& r) {
        fedsim::WriteOverlapRows(csv, r);
      };
      config.metrics_csv.clear();
      config.overlap_csv.clear();
      config.model_out.clear();
      fedsim::RunExperiment(config, opts);
      WriteText(out_path, csv.str());
      return 0;
    }

    if (*sweep) {
      const auto param = sweep_param == "gamma" ? fedsim::SweepParam::kGamma
                                                : fedsim::SweepParam::kAlpha;
      auto values = values_csv.empty() ? fedsim::DefaultSweepValues(param, config)
                                       : ParseValues(values_csv);
      PrintSweep(sweep_param, fedsim::RunSweep(config, param, values));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
