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

#ifndef FEDSIM_BCRS_H_
#define FEDSIM_BCRS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedsim/netsim.h"

namespace fedsim {

// Bandwidth-aware compression ratio scheduling.
//
// Every selected client's upload time at the default ratio CR* is
//   T_i = L_i + 2 * V * CR* / B_i
// and the slowest of those becomes the benchmark T_bench. Each client then
// gets the ratio that makes its own upload finish exactly at T_bench,
//   CR_i = (T_bench - L_i) * B_i / (2 * V),
// capped at 1. Averaging coefficients are scaled down for clients whose share
// of the transmitted ratios exceeds their share of the data:
//   p'_i = f_i / max(f_i, Norm(CR_i)) * alpha,  Norm(CR_i) = CR_i / sum_j CR_j.

struct BenchmarkResult {
  double t_bench = 0.0;
  std::size_t index = 0;  // position within the profiles span
};

BenchmarkResult BenchmarkTime(std::span<const ClientProfile> profiles,
                              double v_bits, double cr_default);

// Throws SchedulingError when t_bench <= L_i for some client.
std::vector<double> ScheduleRatios(std::span<const ClientProfile> profiles,
                                   double v_bits, double t_bench);

std::vector<double> NormalizeRatios(std::span<const double> ratios);

std::vector<double> ClientCoefficients(std::span<const double> data_fractions,
                                       std::span<const double> norm_ratios,
                                       double alpha);

// f_i = n_i / sum_j n_j over the given profiles.
std::vector<double> DataFractions(std::span<const ClientProfile> profiles);

struct RoundPlan {
  std::vector<std::size_t> selected;
  std::vector<double> ratios;
  std::vector<double> norm_ratios;
  std::vector<double> coefficients;
  double t_bench = 0.0;
  std::size_t bench_client = 0;  // client id of the benchmark (slowest) client
};

// Runs the full schedule for one round. profiles must be aligned with
// selected. Scheduled ratios are additionally floored at cr_default and the
// benchmark client is pinned to cr_default, so rounding in the inverse formula
// can never push a client below CR*.
RoundPlan PlanRound(std::span<const std::size_t> selected,
                    std::span<const ClientProfile> profiles, double v_bits,
                    double cr_default, double alpha);

}  // namespace fedsim

#endif  // FEDSIM_BCRS_H_
