//
// Copyright 2026 The dpsco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSCO_HARNESS_H_
#define DPSCO_HARNESS_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpsco/accountant.h"
#include "dpsco/private_erm.h"
#include "dpsco/problem.h"
#include "dpsco/tasks.h"

namespace dpsco {

enum class Algo { kPrivateAcsa, kErmGeneral, kLocalize, kScoStrongly, kDpsgdBaseline };

std::string_view AlgoName(Algo algo);
std::optional<Algo> ParseAlgo(std::string_view name);

struct DpsgdOptions {
  // Upper limit on the number of steps; 0 disables the cap.
  std::uint64_t step_cap = 0;
  // Replaces the default T = N^2.
  std::optional<std::uint64_t> steps;
};

// Per-step noise G sqrt(ln(1/delta)) / eps.
double DpsgdSigma(double G, const ApproxDpBudget& budget);

// Projected noisy SGD with batch size 1, T = N^2 steps (possibly capped),
// step size D / (G_eff sqrt(T)) with G_eff^2 = G^2 + d sigma^2, averaged
// iterate. Its privacy follows from the cited schedule and is not re-derived:
// `spent` reports the requested budget.
SolveResult DpsgdBaseline(const LossFamily& family, const Dataset& data, const Domain& domain,
                          const Vector& w0, const ApproxDpBudget& budget, std::uint64_t seed,
                          const DpsgdOptions& options = {});

// Runs `algo` on the given problem. private-acsa is a single Private AC-SA
// call on the strongly convex schedule at the full budget, adding the
// erm-general offset when the family is not strongly convex.
SolveResult RunAlgo(Algo algo, const LossFamily& family, const Dataset& data, const Domain& domain,
                    const Vector& w0, const ApproxDpBudget& budget,
                    const AccountantConstants& consts, std::uint64_t seed,
                    const DpsgdOptions& dpsgd = {});

struct ExperimentConfig {
  TaskOptions task;
  Algo algo = Algo::kErmGeneral;
  ApproxDpBudget budget{0.5, 1e-5};
  std::vector<std::uint64_t> seeds{1};
  AccountantConstants consts;
  DpsgdOptions dpsgd;
  // Size of the Monte-Carlo population set; 0 skips population loss.
  std::uint64_t population_mc = 0;
  unsigned threads = 1;
  bool record_timing = false;
};

struct TrialResult {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::string digest;
  double excess_empirical_risk = 0.0;
  std::optional<double> excess_population_loss;
  double reference_value = 0.0;
  bool reference_certified = false;
  std::uint64_t gradient_count = 0;
  ApproxDpBudget spent{0.0, 0.0};
  double wall_time = 0.0;
  std::vector<PhaseRecord> phases;
  Vector point;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};

Summary Summarize(const std::vector<double>& values);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  Summary excess_empirical;
  Summary excess_population;
  Summary gradient_count;
  std::size_t failures = 0;
};

// Population objects shared across sweep points that differ only in N: per
// seed, a Monte-Carlo evaluation set and its exact minimum.
struct PopulationCache {
  struct Entry {
    Dataset eval;
    double min_value = 0.0;
  };
  std::map<std::uint64_t, Entry> entries;
  std::mutex mu;
};

// Runs all trials; a failed trial is recorded and the run continues. Results
// are ordered by seed position regardless of thread count.
ExperimentReport RunExperiment(const ExperimentConfig& cfg, PopulationCache* cache = nullptr);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);

enum class SweepAxis { kN, kDim, kEps };

struct SweepReport {
  SweepAxis axis = SweepAxis::kN;
  std::vector<double> values;
  std::vector<ExperimentReport> points;
  double risk_slope = 0.0;
  double population_slope = 0.0;
  double count_slope = 0.0;
};

SweepReport RunSweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values);

// Invariant checks for --check mode; empty when everything holds.
std::vector<std::string> CheckReport(const ExperimentReport& report);

std::string DigestPoint(const Vector& point);

}  // namespace dpsco

#endif  // DPSCO_HARNESS_H_
