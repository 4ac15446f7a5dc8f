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

#include "fedsim/bcrs.h"

#include <algorithm>
#include <string>

#include "fedsim/errors.h"

namespace fedsim {

BenchmarkResult BenchmarkTime(std::span<const ClientProfile> profiles,
                              double v_bits, double cr_default) {
  if (profiles.empty()) throw ParameterError("benchmark needs a non-empty selection");
  if (!(cr_default > 0.0 && cr_default <= 1.0)) {
    throw ParameterError("default compression ratio must lie in (0, 1]");
  }
  if (!(v_bits > 0.0)) throw ParameterError("model size must be positive");

  BenchmarkResult best;
  best.t_bench = 0.0;
  best.index = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const double t = profiles[i].latency_s +
                     2.0 * v_bits * cr_default / profiles[i].bandwidth_bps;
    if (t > best.t_bench) {
      best.t_bench = t;
      best.index = i;
    }
  }
  return best;
}

std::vector<double> ScheduleRatios(std::span<const ClientProfile> profiles,
                                   double v_bits, double t_bench) {
  std::vector<double> ratios(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const double slack = t_bench - profiles[i].latency_s;
    if (!(slack > 0.0)) {
      throw SchedulingError("benchmark time " + std::to_string(t_bench) +
                            " s does not exceed latency of client " +
                            std::to_string(i));
    }
    ratios[i] = std::min(1.0, slack / (2.0 * v_bits) * profiles[i].bandwidth_bps);
  }
  return ratios;
}

std::vector<double> NormalizeRatios(std::span<const double> ratios) {
  double total = 0.0;
  for (double r : ratios) total += r;
  std::vector<double> out(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) out[i] = ratios[i] / total;
  return out;
}

std::vector<double> ClientCoefficients(std::span<const double> data_fractions,
                                       std::span<const double> norm_ratios,
                                       double alpha) {
  if (data_fractions.size() != norm_ratios.size()) {
    throw DimensionError("have " + std::to_string(data_fractions.size()) +
                         " data fractions but " +
                         std::to_string(norm_ratios.size()) + " ratios");
  }
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  std::vector<double> p(data_fractions.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double f = data_fractions[i];
    p[i] = f / std::max(f, norm_ratios[i]) * alpha;
  }
  return p;
}

std::vector<double> DataFractions(std::span<const ClientProfile> profiles) {
  double total = 0.0;
  for (const auto& p : profiles) total += static_cast<double>(p.n_samples);
  std::vector<double> f(profiles.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = static_cast<double>(profiles[i].n_samples) / total;
  }
  return f;
}

RoundPlan PlanRound(std::span<const std::size_t> selected,
                    std::span<const ClientProfile> profiles, double v_bits,
                    double cr_default, double alpha) {
  if (selected.size() != profiles.size()) {
    throw DimensionError("selection and profiles are not aligned");
  }
  const BenchmarkResult bench = BenchmarkTime(profiles, v_bits, cr_default);

  RoundPlan plan;
  plan.selected.assign(selected.begin(), selected.end());
  plan.t_bench = bench.t_bench;
  plan.bench_client = selected[bench.index];
  plan.ratios = ScheduleRatios(profiles, v_bits, bench.t_bench);
  for (double& r : plan.ratios) r = std::max(r, cr_default);
  plan.ratios[bench.index] = cr_default;
  plan.norm_ratios = NormalizeRatios(plan.ratios);
  plan.coefficients =
      ClientCoefficients(DataFractions(profiles), plan.norm_ratios, alpha);
  return plan;
}

}  // namespace fedsim
