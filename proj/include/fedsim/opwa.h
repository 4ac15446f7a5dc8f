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

#ifndef FEDSIM_OPWA_H_
#define FEDSIM_OPWA_H_

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fedsim/model_core.h"

namespace fedsim {

// Parameter index -> number of selected clients whose compressed update
// retains it. Indices retained by nobody are absent.
using OverlapCounts = std::map<std::size_t, int>;

OverlapCounts ComputeOverlap(std::span<const SparseUpdate> updates);

// Per-index multiplier: gamma where the overlap degree is <= D, else 1.
// Indices not present in the counts map to 1.
class OverlapMask {
 public:
  OverlapMask() = default;
  OverlapMask(const OverlapCounts& counts, int max_degree, double gamma);

  double multiplier(std::size_t index) const {
    auto it = multipliers_.find(index);
    return it == multipliers_.end() ? 1.0 : it->second;
  }
  const std::map<std::size_t, double>& multipliers() const {
    return multipliers_;
  }
  // Fraction of counted indices that received gamma.
  double AmplifiedFraction() const;

  SparseUpdate Apply(const SparseUpdate& update) const;

 private:
  std::map<std::size_t, double> multipliers_;
  std::size_t amplified_ = 0;
};

OverlapMask GenerateMask(const OverlapCounts& counts, int max_degree,
                         double gamma);

struct DegreeFraction {
  int degree = 0;
  double fraction = 0.0;

  friend bool operator==(const DegreeFraction&, const DegreeFraction&) = default;
};

// Fraction of retained indices at each overlap degree 1..n_selected. Empty
// counts give an empty histogram.
std::vector<DegreeFraction> OverlapHistogram(const OverlapCounts& counts,
                                             int n_selected);

}  // namespace fedsim

#endif  // FEDSIM_OPWA_H_
