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

#ifndef FEDSIM_AGGREGATION_H_
#define FEDSIM_AGGREGATION_H_

#include <span>
#include <string_view>

#include "fedsim/model_core.h"
#include "fedsim/opwa.h"

namespace fedsim {

enum class AggregationVariant { kFedAvg, kBcrs, kOpwa };

struct AggregationRule {
  AggregationVariant variant = AggregationVariant::kFedAvg;
  double server_rate = 1.0;
};

// Server updates. All three compute
//   w - server_rate * sum_i c_i * densify(u_i)
// accumulating clients in the given order so results are bit-reproducible.
// Coordinates retained by no client come back unchanged.

// c_i = f_i (data fractions over the selection).
ParamVector FedAvgAggregate(const ParamVector& w,
                            std::span<const SparseUpdate> updates,
                            std::span<const double> data_fractions,
                            double server_rate);

// c_i = p'_i (bandwidth-adjusted coefficients).
ParamVector BcrsAggregate(const ParamVector& w,
                          std::span<const SparseUpdate> updates,
                          std::span<const double> coefficients,
                          double server_rate);

// Like BcrsAggregate, with every retained value first scaled by the mask.
ParamVector OpwaAggregate(const ParamVector& w,
                          std::span<const SparseUpdate> updates,
                          std::span<const double> coefficients,
                          const OverlapMask& mask, double server_rate);

}  // namespace fedsim

#endif  // FEDSIM_AGGREGATION_H_
