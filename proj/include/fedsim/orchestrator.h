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

#ifndef FEDSIM_ORCHESTRATOR_H_
#define FEDSIM_ORCHESTRATOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fedsim/compression.h"
#include "fedsim/config.h"
#include "fedsim/data.h"
#include "fedsim/learner.h"
#include "fedsim/model_core.h"
#include "fedsim/netsim.h"
#include "fedsim/opwa.h"
#include "fedsim/random.h"

namespace fedsim {

// Uniform sample of floor(n * c) distinct clients, returned in ascending order.
std::vector<std::size_t> SelectClients(std::size_t n, double c, Rng& rng);

struct RoundReport {
  int round = 0;  // 1-based
  Algorithm algorithm = Algorithm::kFedAvg;
  double test_acc = 0.0;
  double train_loss = 0.0;
  RoundTimes times;
  RoundTimes cumulative;
  std::vector<std::size_t> selected;
  std::vector<double> ratios;
  std::vector<double> coefficients;
  double t_bench = 0.0;
  // Share of retained indices whose multiplier is gamma (bcrs_opwa only).
  double amplified_fraction = 0.0;
  std::vector<DegreeFraction> overlap;
};

// Knobs for equivalence checks on the bcrs path. Not exposed in config files.
struct ScheduleOverride {
  bool uniform_ratios = false;              // every client at CR*
  bool data_fraction_coefficients = false;  // p'_i = f_i
};

// Named seed streams. Each feature draws from its own stream so toggling one
// never perturbs another.
struct SeedStreams {
  std::uint64_t data, split, partition, profiles, init;
  std::uint64_t Selection(int round) const;
  std::uint64_t Shuffle(std::size_t client, int round) const;

  explicit SeedStreams(std::uint64_t master);

 private:
  std::uint64_t master_;
};

// Server state for one experiment: datasets, profiles, global model, EF
// residuals and the time ledger. Each RunRound call executes one
// synchronous round.
class Simulation {
 public:
  explicit Simulation(ExperimentConfig config);

  RoundReport RunRound();

  void set_schedule_override(ScheduleOverride o) { override_ = o; }

  const ExperimentConfig& config() const { return config_; }
  const ModelSpec& model_spec() const { return spec_; }
  const ParamVector& global_params() const { return global_; }
  const Dataset& train_data() const { return split_.train; }
  const Dataset& test_data() const { return split_.test; }
  const Partition& partition() const { return partition_; }
  const std::vector<ClientProfile>& profiles() const { return profiles_; }
  const std::vector<Dataset>& client_data() const { return client_data_; }
  const TimeLedger& ledger() const { return ledger_; }
  int rounds_done() const { return round_; }

 private:
  ExperimentConfig config_;
  SeedStreams seeds_;
  ModelSpec spec_;
  TrainTestSplit split_;
  Partition partition_;
  std::vector<Dataset> client_data_;
  std::vector<ClientProfile> profiles_;
  std::vector<CompressorState> residuals_;
  ParamVector global_;
  TimeLedger ledger_;
  ScheduleOverride override_;
  int round_ = 0;
};

// Loads or synthesizes the full dataset described by the config.
Dataset LoadExperimentData(const ExperimentConfig& config);

// CSV writers. Reals use 9 significant digits.
void WriteMetricsHeader(std::ostream& out);
void WriteMetricsRow(std::ostream& out, const RoundReport& report);
void WriteOverlapHeader(std::ostream& out);
void WriteOverlapRows(std::ostream& out, const RoundReport& report);

struct RunOptions {
  std::string metrics_csv;  // overrides config when non-empty
  std::string overlap_csv;
  std::string model_out;
  ScheduleOverride schedule;
  std::function<void(const RoundReport&)> on_round;
};

// Runs config.rounds rounds, streaming CSV rows as they are produced.
std::vector<RoundReport> RunExperiment(const ExperimentConfig& config,
                                       const RunOptions& options = {});

// Client -> per-class sample counts, as JSON.
std::string PartitionReportJson(const Simulation& sim);

enum class SweepParam { kAlpha, kGamma };

struct SweepResult {
  double value = 0.0;
  double final_test_acc = 0.0;
  double best_test_acc = 0.0;
  RoundTimes cumulative;
};

// Default grids: alpha {0.01, 0.03, 0.1, 0.3, 1}; gamma {1, 3, 5, ..., N}.
std::vector<double> DefaultSweepValues(SweepParam param,
                                       const ExperimentConfig& config);

// One full run per value. When the config names a metrics file, each run
// writes <stem>_<param><value><ext> next to it.
std::vector<SweepResult> RunSweep(const ExperimentConfig& config,
                                  SweepParam param,
                                  const std::vector<double>& values);

}  // namespace fedsim

#endif  // FEDSIM_ORCHESTRATOR_H_
