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

#ifndef FEDSIM_DATA_H_
#define FEDSIM_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fedsim {

// Row-major feature matrix plus integer labels in [0, n_classes).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<double> features, std::vector<int> labels,
          std::size_t n_features, int n_classes);

  std::size_t n_samples() const { return labels_.size(); }
  std::size_t n_features() const { return n_features_; }
  int n_classes() const { return n_classes_; }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * n_features_, n_features_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::span<const double> features() const { return features_; }

  // Copies the given rows, in order, into a new dataset.
  Dataset Subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> features_;
  std::vector<int> labels_;
  std::size_t n_features_ = 0;
  int n_classes_ = 0;
};

// Per-client row indices into a parent dataset.
struct Partition {
  std::vector<std::vector<std::size_t>> clients;

  std::vector<std::size_t> Sizes() const;
  // counts[client][class]
  std::vector<std::vector<std::size_t>> ClassCounts(
      std::span<const int> labels, int n_classes) const;
};

std::vector<double> SampleDirichlet(double beta, std::size_t k,
                                    std::uint64_t seed);

// Label-skew split: every class is divided across clients by its own
// Dirichlet(beta) draw with largest-remainder rounding. Clients that end up
// empty take one sample from the currently largest client.
Partition DirichletPartition(std::span<const int> labels, std::size_t n_clients,
                             double beta, std::uint64_t seed);

// Balanced Gaussian clusters with unit-variance noise. Class means are placed
// so that neighbouring means are class_sep apart.
Dataset SynthClassification(std::size_t n_samples, std::size_t n_features,
                            int n_classes, double class_sep,
                            std::uint64_t seed);

// Comma-separated reals with an integer label in the last column.
// n_classes is inferred as max(label) + 1.
Dataset LoadCsvDataset(const std::filesystem::path& path);
void WriteCsvDataset(const Dataset& data, const std::filesystem::path& path);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Shuffles rows and holds out test_fraction of them (rounded down, at least
// one) as a global test set.
TrainTestSplit SplitTrainTest(const Dataset& data, double test_fraction,
                              std::uint64_t seed);

// Shannon entropy (nats) of each client's label distribution.
std::vector<double> ClientLabelEntropies(const Partition& partition,
                                         std::span<const int> labels,
                                         int n_classes);

}  // namespace fedsim

#endif  // FEDSIM_DATA_H_
