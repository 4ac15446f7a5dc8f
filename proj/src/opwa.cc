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

#include "fedsim/opwa.h"

#include <string>

#include "fedsim/errors.h"

namespace fedsim {

OverlapCounts ComputeOverlap(std::span<const SparseUpdate> updates) {
  OverlapCounts counts;
  if (updates.empty()) return counts;
  const std::size_t dim = updates.front().dim();
  for (const auto& u : updates) {
    if (u.dim() != dim) {
      throw DimensionError("overlap over updates of dim " +
                           std::to_string(dim) + " and " +
                           std::to_string(u.dim()));
    }
    for (std::size_t idx : u.indices()) ++counts[idx];
  }
  return counts;
}

OverlapMask::OverlapMask(const OverlapCounts& counts, int max_degree,
                         double gamma) {
  if (max_degree < 1) throw ParameterError("overlap degree D must be >= 1");
  if (!(gamma >= 1.0)) throw ParameterError("enlarge rate gamma must be >= 1");
  for (const auto& [idx, count] : counts) {
    if (count <= max_degree) {
      multipliers_.emplace_hint(multipliers_.end(), idx, gamma);
      ++amplified_;
    } else {
      multipliers_.emplace_hint(multipliers_.end(), idx, 1.0);
    }
  }
}

double OverlapMask::AmplifiedFraction() const {
  if (multipliers_.empty()) return 0.0;
  return static_cast<double>(amplified_) /
         static_cast<double>(multipliers_.size());
}

SparseUpdate OverlapMask::Apply(const SparseUpdate& update) const {
  const auto idx = update.indices();
  const auto val = update.values();
  std::vector<double> scaled(val.size());
  for (std::size_t i = 0; i < val.size(); ++i) {
    scaled[i] = multiplier(idx[i]) * val[i];
  }
  return SparseUpdate({idx.begin(), idx.end()}, std::move(scaled),
                      update.dim());
}

OverlapMask GenerateMask(const OverlapCounts& counts, int max_degree,
                         double gamma) {
  return OverlapMask(counts, max_degree, gamma);
}

std::vector<DegreeFraction> OverlapHistogram(const OverlapCounts& counts,
                                             int n_selected) {
  if (n_selected < 1) throw ParameterError("n_selected must be >= 1");
  if (counts.empty()) return {};
  std::vector<std::size_t> tally(static_cast<std::size_t>(n_selected) + 1, 0);
  for (const auto& [idx, count] : counts) {
    if (count < 1 || count > n_selected) {
      throw ParameterError("overlap degree " + std::to_string(count) +
                           " outside [1, " + std::to_string(n_selected) + "]");
    }
    ++tally[static_cast<std::size_t>(count)];
  }
  const double total = static_cast<double>(counts.size());
  std::vector<DegreeFraction> hist;
  hist.reserve(static_cast<std::size_t>(n_selected));
  for (int d = 1; d <= n_selected; ++d) {
    hist.push_back({d, static_cast<double>(tally[static_cast<std::size_t>(d)]) / total});
  }
  return hist;
}

}  // namespace fedsim
