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

#ifndef DPSCO_PRIVATE_ERM_H_
#define DPSCO_PRIVATE_ERM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpsco/accountant.h"
#include "dpsco/problem.h"

namespace dpsco {

struct PrivateAcsaConfig {
  std::uint64_t T = 1;
  std::uint64_t B = 1;
  double sigma = 0.0;
  double r = 0.0;
  // Strong convexity handed to the AC-SA step schedule, including 2 lambda of
  // the composite term.
  double mu = 0.0;
  // Defaults to G sqrt(d) / r.
  std::optional<double> L_override;
  // When set, the accountant validates (B, T, N, budget) before any data
  // access and certifies the spent budget afterwards.
  std::optional<ApproxDpBudget> budget;

  double Smoothness(double G, int d) const;
};

// One solver phase as emitted into trial reports.
struct PhaseRecord {
  std::string stage;
  int outer = 0;  // enclosing doubling phase, 0 when not nested
  int phase = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t N = 0;
  std::uint64_t T = 0;
  std::uint64_t B = 0;
  double sigma = 0.0;
  double r = 0.0;
  double mu = 0.0;
  std::uint64_t gradient_count = 0;
  double ball_radius = 0.0;
  double reg_lambda = 0.0;
  bool skipped = false;
  std::string note;
  double spent_eps = 0.0;
  double risk = 0.0;  // empirical objective of the phase output on its data
  Vector start;
  Vector point;
};

struct SolveResult {
  Vector point;
  std::uint64_t gradient_count = 0;
  // Accountant-certified spend, summed over phases by basic composition.
  ApproxDpBudget spent{0.0, 0.0};
  std::vector<PhaseRecord> phases;
};

// Private AC-SA over `data` using the smoothed subsampled Gaussian oracle and
// composite term h. Randomness comes from OracleStreams::For(seed, stream).
SolveResult PrivateAcsa(const LossFamily& family, const Dataset& data, const Domain& domain,
                        const Vector& w0, const PrivateAcsaConfig& cfg,
                        const AccountantConstants& consts, std::uint64_t seed,
                        std::uint64_t stream = 0, const QuadraticOffset& h = {});

// T = ceil(100 eps N / (c1 d^(1/4) sqrt(ln 1/delta))),
// B = ceil(sqrt(eps N^2 / (c1 T)) + eps^2 N^2 / (d ln(1/delta) T)), r = D/(T d^(1/4)),
// sigma calibrated by the accountant. nullopt in the trivial regime
// d ln(1/delta) > eps^2 N^2, where any feasible point is good enough.
std::optional<PrivateAcsaConfig> ErmStronglySchedule(double G, double D, double mu,
                                                     std::uint64_t N, int d,
                                                     const ApproxDpBudget& budget,
                                                     const AccountantConstants& consts);

// ceil(log2 log2 N^3), at least 1.
int DoublingPhases(std::uint64_t N);
// (eps / 2^(k+1-i), delta / 2^(k+1-i)) for i = 1..k.
std::vector<ApproxDpBudget> DoublingBudgets(const ApproxDpBudget& budget, int k);

// Runs phase i (1-based) from `start` with the given sub-budget.
using PhaseSolver =
    std::function<SolveResult(const Vector& start, const ApproxDpBudget& sub_budget, int phase)>;

// Warm-started repetition of `solver` over the doubling budget schedule.
SolveResult DoublingReduction(const PhaseSolver& solver, const Vector& w0,
                              const ApproxDpBudget& budget, std::uint64_t N,
                              std::optional<int> k_override = std::nullopt);

// Doubling reduction over ErmStronglySchedule for a strongly convex family
// (modulus family.strong_mu + 2 h.coeff_lambda).
SolveResult ErmStrongly(const LossFamily& family, const Dataset& data, const Domain& domain,
                        const Vector& w0, const ApproxDpBudget& budget,
                        const AccountantConstants& consts, std::uint64_t seed,
                        const QuadraticOffset& h = {},
                        std::optional<int> k_override = std::nullopt);

// u = u_scale * G sqrt(d ln(1/delta)) / (D eps N).
double RegularizationWeight(double G, double D, int d, std::uint64_t N,
                            const ApproxDpBudget& budget, double u_scale = 1.0);

// Adds u ||w - w0||^2 and runs ErmStrongly; returns w0 when u D > G.
SolveResult ErmGeneral(const LossFamily& family, const Dataset& data, const Domain& domain,
                       const Vector& w0, const ApproxDpBudget& budget,
                       const AccountantConstants& consts, std::uint64_t seed,
                       double u_scale = 1.0);

// x_k under x_1 = n, x_{i+1} = sqrt(x_i) + 1 with k = max(1, ceil(log2 log2 n)).
double RecurrenceWitness(double n);

}  // namespace dpsco

#endif  // DPSCO_PRIVATE_ERM_H_
