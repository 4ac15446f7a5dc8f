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

#include "fedsim/orchestrator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <thread>

#include "fedsim/aggregation.h"
#include "fedsim/bcrs.h"
#include "fedsim/errors.h"
#include "json.hpp"

namespace fedsim {

std::vector<std::size_t> SelectClients(std::size_t n, double c, Rng& rng) {
  if (!(c > 0.0 && c <= 1.0)) throw ParameterError("participation must lie in (0, 1]");
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * c));
  if (m < 1) throw ParameterError("floor(n * c) must be >= 1");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first m slots end up a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.UniformIndex(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

SeedStreams::SeedStreams(std::uint64_t master)
    : data(DeriveSeed(master, "data")),
      split(DeriveSeed(master, "split")),
      partition(DeriveSeed(master, "partition")),
      profiles(DeriveSeed(master, "profiles")),
      init(DeriveSeed(master, "init")),
      master_(master) {}

std::uint64_t SeedStreams::Selection(int round) const {
  return DeriveSeed(master_, "selection", static_cast<std::uint64_t>(round));
}

std::uint64_t SeedStreams::Shuffle(std::size_t client, int round) const {
  return DeriveSeed(master_, "shuffle", client, static_cast<std::uint64_t>(round));
}

Dataset LoadExperimentData(const ExperimentConfig& config) {
  if (config.data_source == DataSource::kCsv) return LoadCsvDataset(config.csv_path);
  return SynthClassification(config.n_samples, config.n_features, config.n_classes,
                             config.class_sep, SeedStreams(config.seed).data);
}

Simulation::Simulation(ExperimentConfig config)
    : config_(std::move(config)), seeds_(config_.seed) {
  config_.Validate();
  const Dataset full = LoadExperimentData(config_);
  if (full.n_classes() < 2) throw ParameterError("dataset needs at least two classes");
  split_ = SplitTrainTest(full, kTestFraction, seeds_.split);

  spec_.arch = config_.model;
  spec_.n_features = full.n_features();
  spec_.n_classes = full.n_classes();
  spec_.hidden_units = config_.model == Architecture::kMlp ? config_.hidden_units : 0;

  partition_ = DirichletPartition(split_.train.labels(), config_.num_clients,
                                  config_.beta, seeds_.partition);
  client_data_.reserve(config_.num_clients);
  for (const auto& rows : partition_.clients) {
    client_data_.push_back(split_.train.Subset(rows));
  }
  const auto sizes = partition_.Sizes();
  profiles_ = SampleProfiles(config_.num_clients, config_.network, sizes,
                             seeds_.profiles);
  global_ = InitParams(spec_, seeds_.init);
  residuals_.assign(config_.num_clients, CompressorState::Zero(global_.size()));
}

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown by any task is rethrown after all threads join.
template <typename Fn>
void ParallelFor(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool UsesSchedule(Algorithm a) {
  return a == Algorithm::kBcrs || a == Algorithm::kBcrsOpwa;
}

}  // namespace

RoundReport Simulation::RunRound() {
  const int t = round_;
  Rng selection_rng(seeds_.Selection(t));
  const auto selected =
      SelectClients(config_.num_clients, config_.participation, selection_rng);
  const std::size_t m = selected.size();

  std::vector<ClientProfile> sel_profiles(m);
  for (std::size_t i = 0; i < m; ++i) sel_profiles[i] = profiles_[selected[i]];
  const auto fractions = DataFractions(sel_profiles);
  const std::size_t dim = global_.size();
  const double v_bits = ModelBits(dim);
  const double cr_default = config_.compression_ratio;

  RoundReport report;
  report.round = t + 1;
  report.algorithm = config_.algorithm;
  report.selected = selected;

  std::vector<double> ratios(m, cr_default);
  std::vector<double> coefficients = fractions;
  if (config_.algorithm == Algorithm::kFedAvg) {
    std::fill(ratios.begin(), ratios.end(), 1.0);
  } else if (UsesSchedule(config_.algorithm)) {
    const RoundPlan plan =
        PlanRound(selected, sel_profiles, v_bits, cr_default, config_.alpha);
    report.t_bench = plan.t_bench;
    if (!override_.uniform_ratios) ratios = plan.ratios;
    if (!override_.data_fraction_coefficients) coefficients = plan.coefficients;
  }
  report.ratios = ratios;
  report.coefficients = coefficients;

  // Fan out local training and compression; results land by position so the
  // aggregation order stays ascending by client id.
  std::vector<std::optional<SparseUpdate>> slots(m);
  const bool ef = config_.ErrorFeedbackEnabled();
  ParallelFor(m, config_.workers, [&](std::size_t i) {
    const std::size_t client = selected[i];
    TrainConfig train;
    train.epochs = config_.epochs;
    train.batch_size = config_.batch_size;
    train.lr = config_.lr;
    train.shuffle_seed = seeds_.Shuffle(client, t);
    const ParamVector delta = LocalTrain(global_, spec_, client_data_[client], train);
    if (ef) {
      auto [out, state] = EfTopKSparsify(delta, ratios[i], residuals_[client]);
      residuals_[client] = std::move(state);
      slots[i].emplace(std::move(out));
    } else {
      slots[i].emplace(TopKSparsify(delta, ratios[i]));
    }
  });
  std::vector<SparseUpdate> updates;
  updates.reserve(m);
  for (auto& s : slots) updates.push_back(std::move(*s));

  const OverlapCounts counts = ComputeOverlap(updates);
  report.overlap = OverlapHistogram(counts, static_cast<int>(m));

  switch (config_.algorithm) {
    case Algorithm::kFedAvg:
    case Algorithm::kTopK:
    case Algorithm::kEfTopK:
      global_ = FedAvgAggregate(global_, updates, coefficients, config_.server_rate);
      break;
    case Algorithm::kBcrs:
      global_ = BcrsAggregate(global_, updates, coefficients, config_.server_rate);
      break;
    case Algorithm::kBcrsOpwa: {
      const OverlapMask mask =
          GenerateMask(counts, config_.overlap_degree, config_.gamma);
      report.amplified_fraction = mask.AmplifiedFraction();
      global_ = OpwaAggregate(global_, updates, coefficients, mask,
                              config_.server_rate);
      break;
    }
  }
  if (!global_.AllFinite()) {
    throw ParameterError("global model diverged to non-finite values in round " +
                         std::to_string(t + 1));
  }

  std::vector<double> compressed(m), reference(m);
  for (std::size_t i = 0; i < m; ++i) {
    compressed[i] = CommTime(sel_profiles[i], PayloadBitsAtRatio(ratios[i], dim));
    reference[i] = CommTime(sel_profiles[i], v_bits);
  }
  report.times = ledger_.RecordRound(compressed, reference);
  report.cumulative = ledger_.cumulative();

  report.test_acc = Evaluate(global_, spec_, split_.test).accuracy;
  report.train_loss = Evaluate(global_, spec_, split_.train).mean_loss;
  ++round_;
  return report;
}

namespace {

std::string Real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file " + path);
  return out;
}

void CheckStream(const std::ostream& out, const std::string& path) {
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

void WriteMetricsHeader(std::ostream& out) {
  out << "round,algorithm,test_acc,train_loss,actual_time,max_time,min_time,"
         "cum_actual,cum_max,cum_min\n";
}

void WriteMetricsRow(std::ostream& out, const RoundReport& r) {
  out << r.round << ',' << AlgorithmName(r.algorithm) << ',' << Real(r.test_acc)
      << ',' << Real(r.train_loss) << ',' << Real(r.times.actual) << ','
      << Real(r.times.max) << ',' << Real(r.times.min) << ','
      << Real(r.cumulative.actual) << ',' << Real(r.cumulative.max) << ','
      << Real(r.cumulative.min) << '\n';
}

void WriteOverlapHeader(std::ostream& out) { out << "round,degree,fraction\n"; }

void WriteOverlapRows(std::ostream& out, const RoundReport& r) {
  for (const auto& d : r.overlap) {
    out << r.round << ',' << d.degree << ',' << Real(d.fraction) << '\n';
  }
}

std::vector<RoundReport> RunExperiment(const ExperimentConfig& config,
                                       const RunOptions& options) {
  Simulation sim(config);
  sim.set_schedule_override(options.schedule);

  const std::string metrics_path =
      options.metrics_csv.empty() ? config.metrics_csv : options.metrics_csv;
  const std::string overlap_path =
      options.overlap_csv.empty() ? config.overlap_csv : options.overlap_csv;
  const std::string model_path =
      options.model_out.empty() ? config.model_out : options.model_out;

  std::ofstream metrics, overlap;
  if (!metrics_path.empty()) {
    metrics = OpenOutput(metrics_path);
    WriteMetricsHeader(metrics);
  }
  if (!overlap_path.empty()) {
    overlap = OpenOutput(overlap_path);
    WriteOverlapHeader(overlap);
  }

  std::vector<RoundReport> reports;
  reports.reserve(static_cast<std::size_t>(config.rounds));
  for (int t = 0; t < config.rounds; ++t) {
    RoundReport r = sim.RunRound();
    if (metrics.is_open()) {
      WriteMetricsRow(metrics, r);
      metrics.flush();
      CheckStream(metrics, metrics_path);
    }
    if (overlap.is_open()) {
      WriteOverlapRows(overlap, r);
      overlap.flush();
      CheckStream(overlap, overlap_path);
    }
    if (options.on_round) options.on_round(r);
    reports.push_back(std::move(r));
  }

  if (!model_path.empty()) {
    const ModelSpec& spec = sim.model_spec();
    nlohmann::json doc = {
        {"model", std::string(ArchitectureName(spec.arch))},
        {"n_features", spec.n_features},
        {"n_classes", spec.n_classes},
        {"hidden_units", spec.hidden_units},
        {"params", sim.global_params().vec()},
    };
    auto out = OpenOutput(model_path);
    out << doc.dump() << '\n';
    CheckStream(out, model_path);
  }
  return reports;
}

std::string PartitionReportJson(const Simulation& sim) {
  const Dataset& train = sim.train_data();
  const auto counts = sim.partition().ClassCounts(train.labels(), train.n_classes());
  nlohmann::json clients = nlohmann::json::array();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    clients.push_back({{"client", c},
                       {"n_samples", sim.partition().clients[c].size()},
                       {"class_counts", counts[c]}});
  }
  nlohmann::json doc = {{"num_clients", counts.size()},
                        {"n_classes", train.n_classes()},
                        {"beta", sim.config().beta},
                        {"clients", clients}};
  return doc.dump(2);
}

std::vector<double> DefaultSweepValues(SweepParam param,
                                       const ExperimentConfig& config) {
  if (param == SweepParam::kAlpha) return {0.01, 0.03, 0.1, 0.3, 1.0};
  std::vector<double> gammas{1.0};
  for (std::size_t g = 3; g <= config.num_clients; g += 2) {
    gammas.push_back(static_cast<double>(g));
  }
  if (gammas.back() != static_cast<double>(config.num_clients) &&
      config.num_clients > 1) {
    gammas.push_back(static_cast<double>(config.num_clients));
  }
  return gammas;
}

std::vector<SweepResult> RunSweep(const ExperimentConfig& config,
                                  SweepParam param,
                                  const std::vector<double>& values) {
  std::vector<SweepResult> results;
  for (double v : values) {
    ExperimentConfig run = config;
    const char* name = param == SweepParam::kAlpha ? "alpha" : "gamma";
    if (param == SweepParam::kAlpha) {
      run.alpha = v;
    } else {
      run.gamma = v;
    }
    run.Validate();
    RunOptions opts;
    if (!config.metrics_csv.empty()) {
      std::filesystem::path p(config.metrics_csv);
      p.replace_filename(p.stem().string() + "_" + name + Real(v) +
                         p.extension().string());
      opts.metrics_csv = p.string();
    }
    run.overlap_csv.clear();
    run.model_out.clear();
    const auto reports = RunExperiment(run, opts);
    SweepResult s;
    s.value = v;
    s.final_test_acc = reports.back().test_acc;
    for (const auto& r : reports) s.best_test_acc = std::max(s.best_test_acc, r.test_acc);
    s.cumulative = reports.back().cumulative;
    results.push_back(s);
  }
  return results;
}

}  // namespace fedsim
