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

#include "fedsim/netsim.h"

#include <algorithm>
#include <string>

#include "fedsim/errors.h"
#include "fedsim/model_core.h"
#include "fedsim/random.h"

namespace fedsim {

namespace {
constexpr int kMaxBandwidthRejections = 100;
}  // namespace

std::vector<ClientProfile> SampleProfiles(std::size_t n,
                                          const ProfileDistribution& dist,
                                          std::span<const std::size_t> sizes,
                                          std::uint64_t seed) {
  if (n < 1) throw ParameterError("need at least one client profile");
  if (!(dist.bw_mean > 0.0) || !(dist.bw_std >= 0.0)) {
    throw ParameterError("bandwidth mean must be > 0 and std >= 0");
  }
  if (!(dist.lat_lo > 0.0 && dist.lat_lo < dist.lat_hi)) {
    throw ParameterError("latency range must satisfy 0 < lo < hi");
  }
  if (sizes.size() != n) {
    throw DimensionError("expected " + std::to_string(n) +
                         " dataset sizes, got " + std::to_string(sizes.size()));
  }

  Rng bw_rng = StreamRng(seed, "bandwidth");
  Rng lat_rng = StreamRng(seed, "latency");
  std::vector<ClientProfile> profiles(n);
  for (std::size_t i = 0; i < n; ++i) {
    double bw = bw_rng.Normal(dist.bw_mean, dist.bw_std);
    int rejections = 0;
    while (bw <= 0.0) {
      if (++rejections >= kMaxBandwidthRejections) {
        bw = dist.bw_mean / 100.0;
        break;
      }
      bw = bw_rng.Normal(dist.bw_mean, dist.bw_std);
    }
    profiles[i].bandwidth_bps = bw;
    profiles[i].latency_s =
        dist.lat_lo + (dist.lat_hi - dist.lat_lo) * lat_rng.UniformOpenClosed();
    profiles[i].n_samples = sizes[i];
  }
  return profiles;
}

double CommTime(const ClientProfile& profile, double payload_bits) {
  return profile.latency_s + payload_bits / profile.bandwidth_bps;
}

double ModelBits(std::size_t dim) {
  return static_cast<double>(kWireBitsPerEntry) * static_cast<double>(dim);
}

double PayloadBitsAtRatio(double cr, std::size_t dim) {
  if (cr >= 1.0) return ModelBits(dim);
  return 2.0 * ModelBits(dim) * cr;
}

const RoundTimes& TimeLedger::RecordRound(
    std::span<const double> compressed_times,
    std::span<const double> reference_times) {
  if (compressed_times.empty() || reference_times.empty()) {
    throw ParameterError("a round needs at least one client time");
  }
  RoundTimes r;
  r.actual = *std::max_element(compressed_times.begin(), compressed_times.end());
  r.max = *std::max_element(reference_times.begin(), reference_times.end());
  r.min = *std::min_element(compressed_times.begin(), compressed_times.end());
  rounds_.push_back(r);
  cumulative_.actual += r.actual;
  cumulative_.max += r.max;
  cumulative_.min += r.min;
  return rounds_.back();
}

}  // namespace fedsim
