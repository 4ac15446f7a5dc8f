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

#ifndef FEDSIM_RANDOM_H_
#define FEDSIM_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace fedsim {

// Seeded generator with platform-independent distributions.
//
// std::mt19937_64 produces the same stream everywhere, but the standard
// distribution adaptors do not, so every variate below is derived from raw
// engine output by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform();
  // Uniform on (0, 1].
  double UniformOpenClosed();
  // Unbiased integer on [0, n). n must be > 0.
  std::uint64_t UniformIndex(std::uint64_t n);
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }
  // log of a Gamma(shape, 1) variate. Working in log space keeps tiny shapes
  // (heavy mass near zero) from underflowing.
  double LogGamma(double shape);
  double Gamma(double shape);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(UniformIndex(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Mixes a master seed with a stream name and up to two coordinates into an
// independent child seed. Streams that differ in any argument are unrelated.
std::uint64_t DeriveSeed(std::uint64_t master, std::string_view stream,
                         std::uint64_t a = 0, std::uint64_t b = 0);

inline Rng StreamRng(std::uint64_t master, std::string_view stream,
                     std::uint64_t a = 0, std::uint64_t b = 0) {
  return Rng(DeriveSeed(master, stream, a, b));
}

}  // namespace fedsim

#endif  // FEDSIM_RANDOM_H_
