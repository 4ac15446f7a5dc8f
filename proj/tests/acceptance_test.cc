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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail. Tolerances and scenario constants are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fd_oracle.h"
#include "fedsim/bcrs.h"
#include "fedsim/compression.h"
#include "fedsim/config.h"
#include "fedsim/data.h"
#include "fedsim/learner.h"
#include "fedsim/netsim.h"
#include "fedsim/orchestrator.h"
#include "fedsim/random.h"
#include "topk_oracle.h"

namespace fedsim {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kTopKTimeLimitS = 5.0;
constexpr double kEqualizeRelTol = 1e-9;
constexpr double kBenchRatioTol = 1e-12;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradPercentile = 0.95;
constexpr double kFdStep = 1e-5;
constexpr double kOverlapWinShare = 0.8;
constexpr int kOverlapBurnIn = 5;
constexpr double kTargetAccuracy = 0.30;
constexpr double kConvergenceTimeLimitS = 300.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// 10 clients, 5 per round, strong label skew, MLP. Bandwidth is scaled so the
// payload term dominates latency at CR = 0.01, as for a large model on a
// 1 Mbps link.
ExperimentConfig Scenario(Algorithm algo, double cr) {
  ExperimentConfig c;
  c.algorithm = algo;
  c.num_clients = 10;
  c.participation = 0.5;
  c.rounds = 200;
  c.epochs = 1;
  c.beta = 0.1;
  c.model = Architecture::kMlp;
  c.lr = 0.05;
  c.compression_ratio = cr;
  c.network.bw_mean = 250.0;
  c.network.bw_std = 50.0;
  c.seed = 0;
  return c;
}

Outcome TopKOracle() {
  Rng rng(DeriveSeed(1, "acceptance-topk"));
  const double ratios[] = {0.01, 0.1, 0.5, 1.0};
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.UniformIndex(256);
    const double cr = ratios[trial % 4];
    std::vector<double> v(n);
    // Every third vector draws from a tiny integer alphabet to force ties.
    const bool ties = trial % 3 == 0;
    for (auto& x : v) {
      x = ties ? static_cast<double>(static_cast<int>(rng.UniformIndex(7)) - 3) : rng.Normal();
    }
    const auto got = TopKSparsify(ParamVector(v), cr);
    const auto want = testing::FullSortTopK(v, cr);
    bool same = std::vector<std::size_t>(got.indices().begin(), got.indices().end()) == want;
    for (std::size_t i = 0; same && i < want.size(); ++i) {
      same = got.values()[i] == v[want[i]];
    }
    if (!same) ++mismatches;
  }
  const double secs = Seconds(start);
  return {mismatches == 0 && secs < kTopKTimeLimitS,
          Fmt("1000 vectors, %d mismatches, %.3f s (limit %.0f s)", mismatches, secs,
              kTopKTimeLimitS)};
}

Outcome ErrorFeedbackIdentity() {
  Rng rng(DeriveSeed(2, "acceptance-ef"));
  const std::size_t clients = 5;
  const std::size_t n = 300;
  const double ratios[] = {0.01, 0.1, 0.5, 1.0};
  std::vector<CompressorState> state(clients, CompressorState::Zero(n));
  long violations = 0;
  for (int call = 0; call < 200; ++call) {
    for (std::size_t c = 0; c < clients; ++c) {
      ParamVector v(n);
      for (std::size_t j = 0; j < n; ++j) v[j] = rng.Normal() * std::exp(rng.Normal());
      auto [out, next] = EfTopKSparsify(v, ratios[(call + c) % 4], state[c]);
      const ParamVector dense = Densify(out);
      for (std::size_t j = 0; j < n; ++j) {
        if (dense[j] + next.residual[j] != v[j] + state[c].residual[j]) ++violations;
      }
      state[c] = std::move(next);
    }
  }
  return {violations == 0,
          Fmt("%zu clients x 200 calls, %ld inexact coordinates", clients, violations)};
}

Outcome BcrsEqualization() {
  Rng rng(DeriveSeed(3, "acceptance-bcrs"));
  double worst = 0.0, worst_bench = 0.0;
  int floor_violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.UniformIndex(19);
    ProfileDistribution dist;
    dist.bw_mean = std::pow(10.0, 2.0 + 5.0 * rng.Uniform());
    dist.bw_std = dist.bw_mean * 0.4 * rng.Uniform();
    const std::vector<std::size_t> sizes(n, 1);
    auto profiles = SampleProfiles(n, dist, sizes, rng.NextU64());
    for (auto& p : profiles) p.n_samples = 1 + rng.UniformIndex(1000);
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    const double v_bits = ModelBits(100 + rng.UniformIndex(1'000'000));
    const double cr = trial % 2 ? 0.01 : 0.1;
    const RoundPlan plan = PlanRound(ids, profiles, v_bits, cr, 0.3);
    for (std::size_t i = 0; i < n; ++i) {
      if (plan.ratios[i] < cr) ++floor_violations;
      if (plan.ratios[i] >= 1.0) continue;
      const double t = profiles[i].latency_s +
                       2.0 * v_bits * plan.ratios[i] / profiles[i].bandwidth_bps;
      worst = std::max(worst, std::fabs(t - plan.t_bench) / plan.t_bench);
    }
    worst_bench = std::max(worst_bench, std::fabs(plan.ratios[plan.bench_client] - cr));
  }
  return {worst < kEqualizeRelTol && floor_violations == 0 && worst_bench <= kBenchRatioTol,
          Fmt("500 sets, max rel err %.2e, ratios below CR* %d, bench |CR-CR*| %.2e",
              worst, floor_violations, worst_bench)};
}

// Runs both simulations in lockstep and reports the first diverging round.
int FirstDivergence(Simulation& a, Simulation& b, int rounds) {
  for (int t = 0; t < rounds; ++t) {
    const auto ra = a.RunRound();
    const auto rb = b.RunRound();
    if (!(a.global_params() == b.global_params()) || ra.test_acc != rb.test_acc ||
        ra.train_loss != rb.train_loss) {
      return t + 1;
    }
  }
  return 0;
}

Outcome EquivalenceChain() {
  const int rounds = 20;
  auto with_rounds = [rounds](ExperimentConfig c) {
    c.rounds = rounds;
    return c;
  };
  Simulation fedavg(with_rounds(Scenario(Algorithm::kFedAvg, 0.01)));
  Simulation topk_full(with_rounds(Scenario(Algorithm::kTopK, 1.0)));
  const int d1 = FirstDivergence(fedavg, topk_full, rounds);

  auto opwa_cfg = with_rounds(Scenario(Algorithm::kBcrsOpwa, 0.01));
  opwa_cfg.gamma = 1.0;
  Simulation opwa(opwa_cfg);
  Simulation bcrs(with_rounds(Scenario(Algorithm::kBcrs, 0.01)));
  const int d2 = FirstDivergence(opwa, bcrs, rounds);

  Simulation forced(with_rounds(Scenario(Algorithm::kBcrs, 0.01)));
  forced.set_schedule_override({true, true});
  Simulation topk(with_rounds(Scenario(Algorithm::kTopK, 0.01)));
  const int d3 = FirstDivergence(forced, topk, rounds);

  auto describe = [](int d) { return d == 0 ? std::string("identical") : Fmt("diverge@%d", d); };
  return {d1 == 0 && d2 == 0 && d3 == 0,
          "20 rounds: topk@1 vs fedavg " + describe(d1) + ", opwa@gamma1 vs bcrs " +
              describe(d2) + ", forced bcrs vs topk " + describe(d3)};
}

Outcome GradientCheck() {
  Rng rng(DeriveSeed(5, "acceptance-grad"));
  std::string detail;
  bool pass = true;
  for (auto arch : {Architecture::kLogReg, Architecture::kMlp}) {
    std::vector<double> errors;
    for (int draw = 0; draw < 100; ++draw) {
      const std::size_t f = 2 + rng.UniformIndex(6);
      const int c = 2 + static_cast<int>(rng.UniformIndex(4));
      const ModelSpec spec{arch, f, c, 2 + rng.UniformIndex(8)};
      const auto data = SynthClassification(static_cast<std::size_t>(c) + rng.UniformIndex(12), f, c, 1.0, rng.NextU64());
      auto w = InitParams(spec, rng.NextU64());
      for (std::size_t j = 0; j < w.size(); ++j) w[j] += 0.3 * rng.Normal();
      const auto analytic = Backward(w, spec, data);
      const auto numeric = testing::NumericGradient(w, spec, data, kFdStep);
      const auto e = testing::RelativeErrors(analytic, numeric);
      errors.insert(errors.end(), e.begin(), e.end());
    }
    const double p = testing::Percentile(errors, kGradPercentile);
    pass = pass && p < kGradRelTol;
    detail += Fmt("%s p95 %.2e over %zu coords; ", std::string(ArchitectureName(arch)).c_str(),
                  p, errors.size());
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome DirichletOrdering() {
  const Dataset data = SynthClassification(3000, 32, 10, 2.0, 6);
  const auto labels = data.labels();
  std::vector<double> low, high;
  int seed_wins = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = ClientLabelEntropies(DirichletPartition(labels, 10, 0.1, seed), labels, 10);
    const auto b = ClientLabelEntropies(DirichletPartition(labels, 10, 0.5, seed), labels, 10);
    if (Median(a) < Median(b)) ++seed_wins;
    low.insert(low.end(), a.begin(), a.end());
    high.insert(high.end(), b.begin(), b.end());
  }
  const double ml = Median(low), mh = Median(high);
  return {ml < mh, Fmt("median entropy beta=0.1 %.3f < beta=0.5 %.3f nats "
                       "(per-seed medians lower in %d/50)", ml, mh, seed_wins)};
}

std::map<int, double> DegreeOneFractions(const std::vector<RoundReport>& reports) {
  std::map<int, double> out;
  for (const auto& r : reports) {
    for (const auto& d : r.overlap) {
      if (d.degree == 1) out[r.round] = d.fraction;
    }
  }
  return out;
}

Outcome OverlapDirection() {
  const auto high = DegreeOneFractions(RunExperiment(Scenario(Algorithm::kTopK, 0.01)));
  const auto low = DegreeOneFractions(RunExperiment(Scenario(Algorithm::kTopK, 0.1)));
  int wins = 0, total = 0;
  double mean_high = 0.0, mean_low = 0.0;
  for (const auto& [round, f] : high) {
    if (round <= kOverlapBurnIn) continue;
    ++total;
    if (f > low.at(round)) ++wins;
    mean_high += f;
    mean_low += low.at(round);
  }
  const double share = static_cast<double>(wins) / total;
  return {share >= kOverlapWinShare,
          Fmt("degree-1 share higher at CR=0.01 in %d/%d rounds (%.1f%%, need %.0f%%); "
              "mean %.3f vs %.3f", wins, total, 100.0 * share, 100.0 * kOverlapWinShare,
              mean_high / total, mean_low / total)};
}

// 1-based round at which test accuracy first reaches the target; 0 if never.
int RoundsToTarget(const std::vector<RoundReport>& reports) {
  for (const auto& r : reports) {
    if (r.test_acc >= kTargetAccuracy) return r.round;
  }
  return 0;
}

Outcome ConvergenceTrend() {
  const auto start = Clock::now();
  const auto topk = RunExperiment(Scenario(Algorithm::kTopK, 0.01));
  const auto bcrs = RunExperiment(Scenario(Algorithm::kBcrs, 0.01));
  const int topk_rounds = RoundsToTarget(topk);
  const int bcrs_rounds = RoundsToTarget(bcrs);

  int best_opwa = 0;
  double best_gamma = 0.0;
  std::string per_gamma;
  for (double gamma : {3.0, 5.0, 7.0}) {
    auto c = Scenario(Algorithm::kBcrsOpwa, 0.01);
    c.gamma = gamma;
    const int r = RoundsToTarget(RunExperiment(c));
    per_gamma += Fmt(" g%.0f=%d", gamma, r);
    if (r > 0 && (best_opwa == 0 || r < best_opwa)) {
      best_opwa = r;
      best_gamma = gamma;
    }
  }
  const double secs = Seconds(start);

  const bool a = topk_rounds > 0 && best_opwa > 0 && best_opwa < topk_rounds;
  bool b = false;
  double t_bcrs = 0.0, t_topk = 0.0;
  if (topk_rounds > 0 && bcrs_rounds > 0) {
    t_bcrs = bcrs[static_cast<std::size_t>(bcrs_rounds - 1)].cumulative.actual;
    t_topk = topk[static_cast<std::size_t>(topk_rounds - 1)].cumulative.actual;
    b = t_bcrs < t_topk;
  }
  return {a && b && secs < kConvergenceTimeLimitS,
          Fmt("target %.2f: (a) opwa best gamma=%.0f %d rounds vs topk %d [%s ]; "
              "(b) bcrs %.1f s (round %d) vs topk %.1f s; runtime %.1f s",
              kTargetAccuracy, best_gamma, best_opwa, topk_rounds, per_gamma.c_str(), t_bcrs,
              bcrs_rounds, t_topk, secs)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Determinism() {
  const fs::path dir = fs::temp_directory_path() / "fedsim_acceptance";
  fs::create_directories(dir);
  int configs = 0, differing = 0;
  for (auto algo : {Algorithm::kFedAvg, Algorithm::kTopK, Algorithm::kEfTopK,
                    Algorithm::kBcrs, Algorithm::kBcrsOpwa}) {
    for (std::uint64_t seed : {0, 7}) {
      auto c = Scenario(algo, 0.1);
      c.rounds = 25;
      c.seed = seed;
      c.workers = seed == 7 ? 3 : 1;
      RunOptions first, second;
      first.metrics_csv = (dir / "a.csv").string();
      second.metrics_csv = (dir / "b.csv").string();
      RunExperiment(c, first);
      RunExperiment(c, second);
      ++configs;
      const auto x = Slurp(first.metrics_csv);
      if (x.empty() || x != Slurp(second.metrics_csv)) ++differing;
    }
  }
  return {differing == 0, Fmt("%d configs run twice, %d metrics files differ", configs,
                              differing)};
}

}  // namespace
}  // namespace fedsim

int main() {
  using fedsim::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 top-k oracle", fedsim::TopKOracle},
      {"2 error-feedback identity", fedsim::ErrorFeedbackIdentity},
      {"3 bcrs equalization", fedsim::BcrsEqualization},
      {"4 equivalence chain", fedsim::EquivalenceChain},
      {"5 gradient check", fedsim::GradientCheck},
      {"6 dirichlet ordering", fedsim::DirichletOrdering},
      {"7 overlap direction", fedsim::OverlapDirection},
      {"8 convergence trend", fedsim::ConvergenceTrend},
      {"9 determinism", fedsim::Determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
