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

#ifndef FEDSIM_COMPRESSION_H_
#define FEDSIM_COMPRESSION_H_

#include <cstddef>
#include <utility>

#include "fedsim/model_core.h"

namespace fedsim {

// Number of entries retained at compression ratio cr: max(1, floor(cr * n)).
std::size_t RetainedCount(double cr, std::size_t n);

// Magnitude Top-K. Keeps RetainedCount(cr, n) entries of largest |v|, ties
// going to the lower index. Retained values are copied unmodified.
SparseUpdate TopKSparsify(const ParamVector& v, double cr);

// Per-client error-feedback accumulator. Starts at zero and is carried across
// rounds, including rounds in which the client is not selected.
struct CompressorState {
  ParamVector residual;

  static CompressorState Zero(std::size_t dim) {
    return CompressorState{ParamVector(dim)};
  }
};

// Compresses v + residual and returns the dropped mass as the new residual.
std::pair<SparseUpdate, CompressorState> EfTopKSparsify(
    const ParamVector& v, double cr, const CompressorState& state);

}  // namespace fedsim

#endif  // FEDSIM_COMPRESSION_H_
