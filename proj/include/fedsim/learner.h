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

#ifndef FEDSIM_LEARNER_H_
#define FEDSIM_LEARNER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedsim/data.h"
#include "fedsim/model_core.h"

namespace fedsim {

enum class Architecture { kLogReg, kMlp };

Architecture ParseArchitecture(std::string_view name);
std::string_view ArchitectureName(Architecture arch);

// Parameter layout (flattened, layer by layer, weights before biases):
//   logreg: W[c x f] row-major, b[c]
//   mlp:    W1[h x f], b1[h], W2[c x h], b2[c]
// The hidden layer of the mlp uses ReLU with derivative 0 at 0.
struct ModelSpec {
  Architecture arch = Architecture::kLogReg;
  std::size_t n_features = 0;
  int n_classes = 0;
  std::size_t hidden_units = 0;

  std::size_t ParamCount() const;
};

// Zeros for logreg. For mlp, He-normal weights and zero biases.
ParamVector InitParams(const ModelSpec& spec, std::uint64_t seed);

struct ForwardResult {
  double loss = 0.0;                 // batch-mean softmax cross-entropy
  std::vector<double> probabilities;  // [batch x c] row-major
};

// rows selects the batch from data; an empty span means every row.
ForwardResult ForwardLoss(const ParamVector& params, const ModelSpec& spec,
                          const Dataset& data,
                          std::span<const std::size_t> rows = {});

// Exact gradient of the batch-mean cross-entropy.
ParamVector Backward(const ParamVector& params, const ModelSpec& spec,
                     const Dataset& data,
                     std::span<const std::size_t> rows = {});

struct TrainConfig {
  int epochs = 1;
  std::size_t batch_size = 64;
  double lr = 0.01;
  std::uint64_t shuffle_seed = 0;
};

// Plain mini-batch SGD from w_global; rows are reshuffled each epoch and the
// last partial batch is kept. Returns w_global - w_final.
ParamVector LocalTrain(const ParamVector& w_global, const ModelSpec& spec,
                       const Dataset& data, const TrainConfig& cfg);

// Order of rows visited in the given epoch of LocalTrain.
std::vector<std::size_t> EpochOrder(std::size_t n_samples,
                                    std::uint64_t shuffle_seed, int epoch);

struct Evaluation {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

// argmax ties resolve to the lowest class index.
Evaluation Evaluate(const ParamVector& params, const ModelSpec& spec,
                    const Dataset& data);

}  // namespace fedsim

#endif  // FEDSIM_LEARNER_H_
