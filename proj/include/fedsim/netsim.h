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

#ifndef FEDSIM_NETSIM_H_
#define FEDSIM_NETSIM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fedsim {

struct ClientProfile {
  double bandwidth_bps = 1e6;
  double latency_s = 0.1;
  std::size_t n_samples = 1;
};

struct ProfileDistribution {
  double bw_mean = 1e6;
  double bw_std = 0.2e6;
  double lat_lo = 0.05;
  double lat_hi = 0.2;
};

// Bandwidths ~ Normal(bw_mean, bw_std), resampled while non-positive and
// floored at bw_mean / 100 after 100 rejections. Latencies ~ U(lat_lo, lat_hi].
// sizes[i] becomes the i-th profile's n_samples.
std::vector<ClientProfile> SampleProfiles(std::size_t n,
                                          const ProfileDistribution& dist,
                                          std::span<const std::size_t> sizes,
                                          std::uint64_t seed);

// latency + payload / bandwidth.
double CommTime(const ClientProfile& profile, double payload_bits);

// Dense model size in bits.
double ModelBits(std::size_t dim);

// Nominal uplink payload of a dim-parameter update compressed at ratio cr:
// index + value per retained entry (2 * V * cr), or the dense size at cr == 1.
double PayloadBitsAtRatio(double cr, std::size_t dim);

struct RoundTimes {
  double actual = 0.0;
  double max = 0.0;
  double min = 0.0;
};

// Per-round and cumulative time metrics.
//   actual: the straggler's compressed upload time
//   max:    the straggler's uncompressed (FedAvg) upload time
//   min:    the fastest client's compressed upload time
class TimeLedger {
 public:
  const RoundTimes& RecordRound(std::span<const double> compressed_times,
                                std::span<const double> reference_times);

  const std::vector<RoundTimes>& rounds() const { return rounds_; }
  const RoundTimes& cumulative() const { return cumulative_; }

 private:
  std::vector<RoundTimes> rounds_;
  RoundTimes cumulative_;
};

}  // namespace fedsim

#endif  // FEDSIM_NETSIM_H_
