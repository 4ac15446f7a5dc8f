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

#include "fedsim/aggregation.h"

#include <string>

#include "fedsim/errors.h"

namespace fedsim {

namespace {

void CheckInputs(const ParamVector& w, std::span<const SparseUpdate> updates,
                 std::span<const double> coefficients, double server_rate) {
  if (updates.size() != coefficients.size()) {
    throw DimensionError("have " + std::to_string(updates.size()) +
                         " updates but " + std::to_string(coefficients.size()) +
                         " coefficients");
  }
  for (const auto& u : updates) {
    if (u.dim() != w.size()) {
      throw DimensionError("update dim " + std::to_string(u.dim()) +
                           " does not match model dim " +
                           std::to_string(w.size()));
    }
  }
  if (!(server_rate > 0.0)) throw ParameterError("server rate must be positive");
}

template <typename ScaleFn>
ParamVector WeightedStep(const ParamVector& w,
                         std::span<const SparseUpdate> updates,
                         std::span<const double> coefficients,
                         double server_rate, ScaleFn scale) {
  CheckInputs(w, updates, coefficients, server_rate);
  ParamVector acc(w.size());
  for (std::size_t i = 0; i < updates.size(); ++i) {
    const auto idx = updates[i].indices();
    const auto val = updates[i].values();
    for (std::size_t j = 0; j < idx.size(); ++j) {
      acc[idx[j]] += coefficients[i] * scale(idx[j], val[j]);
    }
  }
  ParamVector next(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    next[j] = w[j] - server_rate * acc[j];
  }
  return next;
}

}  // namespace

ParamVector FedAvgAggregate(const ParamVector& w,
                            std::span<const SparseUpdate> updates,
                            std::span<const double> data_fractions,
                            double server_rate) {
  return WeightedStep(w, updates, data_fractions, server_rate,
                      [](std::size_t, double v) { return v; });
}

ParamVector BcrsAggregate(const ParamVector& w,
                          std::span<const SparseUpdate> updates,
                          std::span<const double> coefficients,
                          double server_rate) {
  return WeightedStep(w, updates, coefficients, server_rate,
                      [](std::size_t, double v) { return v; });
}

ParamVector OpwaAggregate(const ParamVector& w,
                          std::span<const SparseUpdate> updates,
                          std::span<const double> coefficients,
                          const OverlapMask& mask, double server_rate) {
  return WeightedStep(
      w, updates, coefficients, server_rate,
      [&mask](std::size_t idx, double v) { return mask.multiplier(idx) * v; });
}

}  // namespace fedsim
