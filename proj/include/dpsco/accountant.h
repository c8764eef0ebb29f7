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

#ifndef DPSCO_ACCOUNTANT_H_
#define DPSCO_ACCOUNTANT_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace dpsco {

inline constexpr double kUnboundedOmega = std::numeric_limits<double>::infinity();

// (rho, omega)-truncated concentrated DP. omega may be kUnboundedOmega.
struct TcdpBudget {
  double rho = 0.0;
  double omega = kUnboundedOmega;

  void Validate() const;
  bool unbounded() const { return omega == kUnboundedOmega; }
};

struct ApproxDpBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  // Requires epsilon > 0 and delta in (0, 1/2].
  void Validate() const;
};

struct AccountantConstants {
  double c1 = 1.0;
  double c2 = 8.0;
  // Multiplier on G for the per-step gradient-sum sensitivity. The default 1
  // treats replacing one sample as moving the sum by G; use 2 for the
  // conservative replacement bound.
  double sensitivity_factor = 1.0;

  void Validate() const;
};

TcdpBudget GaussianTcdp(double G, double sigma);
TcdpBudget AmplifySubsample(const TcdpBudget& b, double q);
TcdpBudget Compose(const TcdpBudget& a, const TcdpBudget& b);
TcdpBudget ComposeN(const TcdpBudget& b, std::uint64_t n);
// Smallest omega for which the conversion at delta is valid.
double RequiredOmega(double rho, double delta);
ApproxDpBudget TcdpToApproxDp(const TcdpBudget& b, double delta);

// sigma = c2 s B sqrt(T ln(1/delta)) / (epsilon N) with sensitivity
// s = sensitivity_factor * G, without any checks.
double SigmaFormula(double G, std::uint64_t B, std::uint64_t T, std::uint64_t N,
                    const ApproxDpBudget& budget, const AccountantConstants& consts);

struct PipelineReport {
  double G = 0.0;
  double sensitivity = 0.0;
  std::uint64_t B = 0;
  std::uint64_t T = 0;
  std::uint64_t N = 0;
  double sigma = 0.0;
  double q = 0.0;
  TcdpBudget per_step;
  TcdpBudget amplified;
  TcdpBudget composed;
  double required_omega = 0.0;
  ApproxDpBudget spent;
};

// Gaussian -> subsampling amplification -> T-fold composition -> (eps, delta).
PipelineReport RunPipeline(double G, std::uint64_t B, std::uint64_t T, std::uint64_t N, double sigma,
                           double delta, const AccountantConstants& consts);

// Violated preconditions of CalibrateSigma, empty when all hold.
std::vector<std::string> CalibrationViolations(std::uint64_t B, std::uint64_t T, std::uint64_t N,
                                               const ApproxDpBudget& budget,
                                               const AccountantConstants& consts);

struct Calibration {
  double sigma = 0.0;
  PipelineReport pipeline;
};

// Validated sigma, certified by running the pipeline and checking that the
// resulting epsilon does not exceed budget.epsilon.
Calibration CalibrateSigma(double G, std::uint64_t B, std::uint64_t T, std::uint64_t N,
                           const ApproxDpBudget& budget, const AccountantConstants& consts);

std::string PipelineJson(const PipelineReport& report, const ApproxDpBudget* target = nullptr);

}  // namespace dpsco

#endif  // DPSCO_ACCOUNTANT_H_
