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

#include "fedsim/model_core.h"

#include <cmath>
#include <string>

#include "fedsim/errors.h"

namespace fedsim {

bool ParamVector::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

SparseUpdate::SparseUpdate(std::vector<std::size_t> indices,
                           std::vector<double> values, std::size_t dim)
    : indices_(std::move(indices)), values_(std::move(values)), dim_(dim) {
  if (indices_.size() != values_.size()) {
    throw DimensionError("sparse update has " +
                         std::to_string(indices_.size()) + " indices but " +
                         std::to_string(values_.size()) + " values");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= dim_) {
      throw DimensionError("sparse index " + std::to_string(indices_[i]) +
                           " out of range for dim " + std::to_string(dim_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw DimensionError("sparse indices must be strictly increasing");
    }
  }
}

ParamVector ComputeUpdate(const ParamVector& w_global,
                          const ParamVector& w_local) {
  if (w_global.size() != w_local.size()) {
    throw DimensionError("update operands differ in length: " +
                         std::to_string(w_global.size()) + " vs " +
                         std::to_string(w_local.size()));
  }
  ParamVector delta(w_global.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = w_global[i] - w_local[i];
  }
  return delta;
}

ParamVector Densify(const SparseUpdate& update) {
  ParamVector dense(update.dim());
  const auto idx = update.indices();
  const auto val = update.values();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= update.dim()) {
      throw DimensionError("sparse index out of range");
    }
    dense[idx[i]] = val[i];
  }
  return dense;
}

std::int64_t PayloadBits(const SparseUpdate& update) {
  const auto k = static_cast<std::int64_t>(update.nnz());
  const auto dim = static_cast<std::int64_t>(update.dim());
  if (k == dim) return kWireBitsPerEntry * dim;
  return 2 * kWireBitsPerEntry * k;
}

}  // namespace fedsim
