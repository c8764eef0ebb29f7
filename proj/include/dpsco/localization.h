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

#ifndef DPSCO_LOCALIZATION_H_
#define DPSCO_LOCALIZATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dpsco/accountant.h"
#include "dpsco/private_erm.h"
#include "dpsco/problem.h"

namespace dpsco {

struct LocalizationPhase {
  int i = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t N = 0;       // floor(N / 2^i)
  std::size_t offset = 0;    // first sample of the contiguous block
  std::size_t count = 0;     // block size; N plus any leftover
  double eta = 0.0;          // eta / 2^(5i)
  double ball_radius = 0.0;  // 2 G eta_i N_i
  double lambda = 0.0;       // 1 / (eta_i N_i)
  // False when the block is too small for the accountant's B <= N/10; such
  // phases hand their samples to the last runnable phase and are skipped.
  bool runnable = true;
};

struct LocalizationSchedule {
  int k = 0;
  double eta = 0.0;
  std::vector<LocalizationPhase> phases;
};

// eta = (D/G) min(1/sqrt(N), eps/sqrt(d ln(1/delta))) and k = ceil(log2 N).
LocalizationSchedule MakeSchedule(double G, double D, std::uint64_t N, int d,
                                  const ApproxDpBudget& budget,
                                  const AccountantConstants& consts = {});

// Which argument of the min in the phase T won.
enum class PhaseBranch { kSqrtN, kPrivacy };

// T = 400 ceil(min(sqrt(N) d^(1/4), N eps / (d^(1/4) sqrt(ln 1/delta)))),
// B = ceil(N/T + N sqrt(eps/T)), r = D_i / (T d^(1/4)), sigma calibrated.
PrivateAcsaConfig PhaseErmSchedule(double G, std::uint64_t N, int d, const ApproxDpBudget& budget,
                                   double D_i, const AccountantConstants& consts,
                                   PhaseBranch* branch = nullptr);

// Phase ERM (T, B) without calibration, for schedule planning.
std::pair<std::uint64_t, std::uint64_t> PhaseErmCounts(std::uint64_t N, int d,
                                                       const ApproxDpBudget& budget,
                                                       PhaseBranch* branch = nullptr);

// Iterative localization: phase i minimizes the block-i empirical loss plus
// lambda_i ||w - w_{i-1}||^2 over K intersected with B(w_{i-1}, radius_i).
SolveResult Localize(const LossFamily& family, const Dataset& data, const Domain& domain,
                     const Vector& w0, const ApproxDpBudget& budget,
                     const AccountantConstants& consts, std::uint64_t seed,
                     std::uint64_t stream_base = 0);

// Doubling wrapper: wrapper phase i runs Localize on a fresh block of
// floor(N / 2^(k+1-i)) samples at budget (eps, delta) / 2^(k+1-i).
SolveResult ScoStrongly(const LossFamily& family, const Dataset& data, const Domain& domain,
                        const Vector& w0, const ApproxDpBudget& budget,
                        const AccountantConstants& consts, std::uint64_t seed,
                        std::optional<int> k_override = std::nullopt);

}  // namespace dpsco

#endif  // DPSCO_LOCALIZATION_H_
