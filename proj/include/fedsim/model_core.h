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

#ifndef FEDSIM_MODEL_CORE_H_
#define FEDSIM_MODEL_CORE_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace fedsim {

// Bits used on the wire for one index or one value. In-memory arithmetic is
// 64-bit; this only drives cost accounting.
inline constexpr std::int64_t kWireBitsPerEntry = 32;

// Flat dense vector of model parameters, gradients or updates.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim) : values_(dim, 0.0) {}
  explicit ParamVector(std::vector<double> values)
      : values_(std::move(values)) {}
  ParamVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }

  bool AllFinite() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

// Index/value encoding of a compressed update. Indices are strictly
// increasing and below dim; construction validates this.
class SparseUpdate {
 public:
  SparseUpdate(std::vector<std::size_t> indices, std::vector<double> values,
               std::size_t dim);

  std::span<const std::size_t> indices() const { return indices_; }
  std::span<const double> values() const { return values_; }
  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return indices_.size(); }

  friend bool operator==(const SparseUpdate&, const SparseUpdate&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::vector<double> values_;
  std::size_t dim_;
};

// w_global - w_local, elementwise.
ParamVector ComputeUpdate(const ParamVector& w_global,
                          const ParamVector& w_local);

ParamVector Densify(const SparseUpdate& update);

// 64 bits per retained entry (index + value), or 32 bits per entry when every
// coordinate is retained and indices can be dropped.
std::int64_t PayloadBits(const SparseUpdate& update);

}  // namespace fedsim

#endif  // FEDSIM_MODEL_CORE_H_
