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

#include "fedsim/compression.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fedsim/errors.h"

namespace fedsim {

std::size_t RetainedCount(double cr, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::floor(cr * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

SparseUpdate TopKSparsify(const ParamVector& v, double cr) {
  if (!(cr > 0.0 && cr <= 1.0)) {
    throw ParameterError("compression ratio must lie in (0, 1], got " +
                         std::to_string(cr));
  }
  if (v.empty()) throw DimensionError("cannot sparsify an empty vector");

  const std::size_t n = v.size();
  const std::size_t k = RetainedCount(cr, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (k < n) {
    auto before = [&v](std::size_t a, std::size_t b) {
      const double ma = std::fabs(v[a]);
      const double mb = std::fabs(v[b]);
      return ma > mb || (ma == mb && a < b);
    };
    std::nth_element(order.begin(), order.begin() + static_cast<long>(k),
                     order.end(), before);
    order.resize(k);
    std::sort(order.begin(), order.end());
  }

  std::vector<double> values(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) values[i] = v[order[i]];
  return SparseUpdate(std::move(order), std::move(values), n);
}

std::pair<SparseUpdate, CompressorState> EfTopKSparsify(
    const ParamVector& v, double cr, const CompressorState& state) {
  if (state.residual.size() != v.size()) {
    throw DimensionError("residual dim " +
                         std::to_string(state.residual.size()) +
                         " does not match update dim " +
                         std::to_string(v.size()));
  }
  ParamVector corrected(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    corrected[i] = v[i] + state.residual[i];
  }
  SparseUpdate out = TopKSparsify(corrected, cr);

  // Retained coordinates leave exactly zero behind; everything else carries
  // over unchanged, so densify(out) + residual' == corrected bit for bit.
  CompressorState next{corrected};
  for (std::size_t idx : out.indices()) next.residual[idx] = 0.0;
  return {std::move(out), std::move(next)};
}

}  // namespace fedsim
