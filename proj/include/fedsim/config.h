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

#ifndef FEDSIM_CONFIG_H_
#define FEDSIM_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fedsim/learner.h"
#include "fedsim/netsim.h"

namespace fedsim {

enum class Algorithm { kFedAvg, kTopK, kEfTopK, kBcrs, kBcrsOpwa };

Algorithm ParseAlgorithm(std::string_view name);
std::string_view AlgorithmName(Algorithm algo);

enum class DataSource { kSynthetic, kCsv };

// Fraction of the dataset held out as the global test split.
inline constexpr double kTestFraction = 0.2;

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kBcrsOpwa;
  std::size_t num_clients = 10;   // N
  double participation = 0.5;     // C
  int rounds = 200;               // T
  int epochs = 1;                 // E
  std::size_t batch_size = 64;
  double lr = 0.01;               // local SGD rate
  double alpha = 0.3;             // server learning rate in p'
  double gamma = 5.0;             // enlarge rate
  int overlap_degree = 1;         // D
  double compression_ratio = 0.1; // CR*
  double beta = 0.5;              // Dirichlet concentration
  std::uint64_t seed = 0;
  double server_rate = 1.0;
  // Unset means on for eftopk only.
  std::optional<bool> error_feedback;
  std::size_t workers = 1;

  DataSource data_source = DataSource::kSynthetic;
  std::string csv_path;
  std::size_t n_samples = 3000;
  std::size_t n_features = 32;
  int n_classes = 10;
  double class_sep = 2.0;

  Architecture model = Architecture::kMlp;
  std::size_t hidden_units = 64;

  ProfileDistribution network;

  std::string metrics_csv;
  std::string overlap_csv;
  std::string model_out;

  std::size_t SelectedPerRound() const;
  bool ErrorFeedbackEnabled() const;

  // Throws ParameterError on the first violated constraint.
  void Validate() const;

  // Flat JSON object; unknown keys are rejected.
  static ExperimentConfig FromJsonText(std::string_view text);
  static ExperimentConfig FromFile(const std::filesystem::path& path);
  std::string ToJsonText() const;
};

}  // namespace fedsim

#endif  // FEDSIM_CONFIG_H_
