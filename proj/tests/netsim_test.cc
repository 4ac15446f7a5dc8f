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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fedsim/errors.h"

namespace fedsim {
namespace {

std::vector<std::size_t> Ones(std::size_t n) { return std::vector<std::size_t>(n, 1); }

TEST_CASE("CommTime is latency plus payload over bandwidth") {
  CHECK(CommTime({1e6, 0.05, 1}, 1e6) == doctest::Approx(1.05).epsilon(1e-15));
  CHECK(CommTime({1e6, 0.05, 1}, 0.0) == 0.05);
  CHECK(CommTime({2e6, 0.1, 1}, 4e5) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("CommTime is monotone in payload, latency and bandwidth") {
  const ClientProfile base{1e6, 0.1, 1};
  CHECK(CommTime(base, 2000) > CommTime(base, 1000));
  CHECK(CommTime({1e6, 0.2, 1}, 1000) > CommTime(base, 1000));
  CHECK(CommTime({2e6, 0.1, 1}, 1000) < CommTime(base, 1000));
}

TEST_CASE("Nominal payload follows the index+value model") {
  CHECK(ModelBits(100) == 3200.0);
  CHECK(PayloadBitsAtRatio(0.1, 100) == doctest::Approx(640.0));
  CHECK(PayloadBitsAtRatio(1.0, 100) == 3200.0);
}

TEST_CASE("Zero bandwidth spread gives the mean everywhere") {
  const auto sizes = Ones(20);
  const auto p = SampleProfiles(20, {1e6, 0.0, 0.05, 0.2}, sizes, 7);
  for (const auto& c : p) CHECK(c.bandwidth_bps == 1e6);
}

TEST_CASE("Latencies fall in (lo, hi]") {
  const auto sizes = Ones(5000);
  const auto p = SampleProfiles(5000, ProfileDistribution{}, sizes, 1);
  for (const auto& c : p) {
    CHECK(c.latency_s > 0.05);
    CHECK(c.latency_s <= 0.2);
    CHECK(c.bandwidth_bps > 0.0);
  }
}

TEST_CASE("Empirical bandwidth mean is within three standard errors") {
  const std::size_t n = 10000;
  const auto sizes = Ones(n);
  const ProfileDistribution dist{1e6, 0.2e6, 0.05, 0.2};
  const auto p = SampleProfiles(n, dist, sizes, 42);
  double total = 0.0;
  for (const auto& c : p) total += c.bandwidth_bps;
  const double mean = total / static_cast<double>(n);
  CHECK(std::fabs(mean - dist.bw_mean) < 3.0 * dist.bw_std / std::sqrt(double(n)));
}

TEST_CASE("Heavy spread still yields positive bandwidths") {
  const auto sizes = Ones(2000);
  const auto p = SampleProfiles(2000, {1.0, 50.0, 0.05, 0.2}, sizes, 3);
  for (const auto& c : p) CHECK(c.bandwidth_bps > 0.0);
}

TEST_CASE("Profile sampling is seed-deterministic and carries sizes") {
  const std::vector<std::size_t> sizes{3, 1, 4};
  const auto a = SampleProfiles(3, ProfileDistribution{}, sizes, 9);
  const auto b = SampleProfiles(3, ProfileDistribution{}, sizes, 9);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].bandwidth_bps == b[i].bandwidth_bps);
    CHECK(a[i].latency_s == b[i].latency_s);
    CHECK(a[i].n_samples == sizes[i]);
  }
  const auto c = SampleProfiles(3, ProfileDistribution{}, sizes, 10);
  CHECK(c[0].bandwidth_bps != a[0].bandwidth_bps);
}

TEST_CASE("Profile sampling validates ranges") {
  const auto sizes = Ones(2);
  CHECK_THROWS_AS(SampleProfiles(0, {}, {}, 0), ParameterError);
  CHECK_THROWS_AS(SampleProfiles(2, {0.0, 1.0, 0.05, 0.2}, sizes, 0), ParameterError);
  CHECK_THROWS_AS(SampleProfiles(2, {1e6, -1.0, 0.05, 0.2}, sizes, 0), ParameterError);
  CHECK_THROWS_AS(SampleProfiles(2, {1e6, 1.0, 0.2, 0.05}, sizes, 0), ParameterError);
  CHECK_THROWS_AS(SampleProfiles(2, {1e6, 1.0, 0.0, 0.05}, sizes, 0), ParameterError);
}

TEST_CASE("TimeLedger records max, reference max and min") {
  TimeLedger ledger;
  const std::vector<double> c{1, 2, 3}, r{10, 20, 30};
  const auto& t = ledger.RecordRound(c, r);
  CHECK(t.actual == 3);
  CHECK(t.max == 30);
  CHECK(t.min == 1);

  TimeLedger single;
  const std::vector<double> five{5};
  const auto& s = single.RecordRound(five, five);
  CHECK(s.actual == 5);
  CHECK(s.max == 5);
  CHECK(s.min == 5);
}

TEST_CASE("TimeLedger accumulates exactly and rejects empty rounds") {
  TimeLedger ledger;
  const std::vector<double> a{3}, b{4}, ref{9};
  ledger.RecordRound(a, ref);
  ledger.RecordRound(b, ref);
  CHECK(ledger.cumulative().actual == 7);
  CHECK(ledger.cumulative().max == 18);
  CHECK(ledger.rounds().size() == 2);

  const std::vector<double> empty;
  CHECK_THROWS_AS(ledger.RecordRound(empty, ref), ParameterError);
  CHECK_THROWS_AS(ledger.RecordRound(a, empty), ParameterError);
}

}  // namespace
}  // namespace fedsim
