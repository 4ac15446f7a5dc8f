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

#ifndef FEDSIM_TESTS_FD_ORACLE_H_
#define FEDSIM_TESTS_FD_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fedsim/data.h"
#include "fedsim/learner.h"
#include "fedsim/model_core.h"

namespace fedsim::testing {

// Central differences of the batch loss, one coordinate at a time.
inline std::vector<double> NumericGradient(const ParamVector& params, const ModelSpec& spec,
                                           const Dataset& data, double step) {
  std::vector<double> g(params.size());
  ParamVector w = params;
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double orig = w[j];
    w[j] = orig + step;
    const double up = ForwardLoss(w, spec, data).loss;
    w[j] = orig - step;
    const double down = ForwardLoss(w, spec, data).loss;
    w[j] = orig;
    g[j] = (up - down) / (2.0 * step);
  }
  return g;
}

// |a - n| / max(|a| + |n|, floor) per coordinate.
inline std::vector<double> RelativeErrors(const ParamVector& analytic,
                                          const std::vector<double>& numeric,
                                          double floor = 1e-7) {
  std::vector<double> e(numeric.size());
  for (std::size_t j = 0; j < numeric.size(); ++j) {
    const double denom = std::max(std::fabs(analytic[j]) + std::fabs(numeric[j]), floor);
    e[j] = std::fabs(analytic[j] - numeric[j]) / denom;
  }
  return e;
}

inline double Percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(i, v.size() - 1)];
}

}  // namespace fedsim::testing

#endif  // FEDSIM_TESTS_FD_ORACLE_H_
