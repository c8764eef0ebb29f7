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

#include "dpsco/accountant.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpsco/error.h"
#include "json.hpp"

namespace dpsco {
namespace {

std::string Num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

nlohmann::json OmegaJson(double omega) {
  if (omega == kUnboundedOmega) return "inf";
  return omega;
}

nlohmann::json TcdpJson(const TcdpBudget& b) {
  return {{"rho", b.rho}, {"omega", OmegaJson(b.omega)}};
}

}  // namespace

void TcdpBudget::Validate() const {
  Require(rho >= 0.0 && std::isfinite(rho), "tCDP rho must be finite and >= 0");
  Require(omega > 1.0, "tCDP omega must exceed 1");
}

void ApproxDpBudget::Validate() const {
  Require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
  Require(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
}

void AccountantConstants::Validate() const {
  Require(c1 > 0.0 && c1 <= 1.0, "c1 must lie in (0, 1]");
  Require(c2 >= 1.0 && std::isfinite(c2), "c2 must be >= 1");
  Require(sensitivity_factor > 0.0, "sensitivity factor must be positive");
}

TcdpBudget GaussianTcdp(double G, double sigma) {
  Require(G >= 0.0 && std::isfinite(G), "Gaussian mechanism: G must be >= 0");
  Require(sigma >= 0.0, "Gaussian mechanism: sigma must be >= 0");
  if (G == 0.0) return {0.0, kUnboundedOmega};
  if (sigma == 0.0) Fail(ErrorCode::kNoPrivacy, "Gaussian mechanism with sigma = 0 and G > 0");
  return {G * G / (2.0 * sigma * sigma), kUnboundedOmega};
}

TcdpBudget AmplifySubsample(const TcdpBudget& b, double q) {
  b.Validate();
  Require(q > 0.0 && q < 1.0, "subsampling rate q must lie in (0, 1)");
  const double rho = b.rho;
  if (!(rho > 0.0 && rho <= 0.1)) {
    Fail(ErrorCode::kPrecondition, "amplification requires 0 < rho <= 0.1, got rho=" + Num(rho));
  }
  const double log_inv_q = std::log(1.0 / q);
  const double rhs = 3.0 * rho * (2.0 + std::log2(1.0 / rho));
  if (log_inv_q < rhs) {
    Fail(ErrorCode::kPrecondition, "amplification requires ln(1/q) >= 3 rho (2 + log2(1/rho)): " +
                                       Num(log_inv_q) + " < " + Num(rhs));
  }
  const double omega_needed = log_inv_q / (2.0 * rho);
  if (omega_needed < 3.0) {
    Fail(ErrorCode::kPrecondition,
         "amplification requires ln(1/q)/(2 rho) >= 3, got " + Num(omega_needed));
  }
  if (b.omega < omega_needed) {
    Fail(ErrorCode::kPrecondition, "amplification requires omega >= ln(1/q)/(2 rho): " +
                                       Num(b.omega) + " < " + Num(omega_needed));
  }
  return {13.0 * q * q * rho, log_inv_q / (4.0 * rho)};
}

TcdpBudget Compose(const TcdpBudget& a, const TcdpBudget& b) {
  a.Validate();
  b.Validate();
  return {a.rho + b.rho, std::min(a.omega, b.omega)};
}

TcdpBudget ComposeN(const TcdpBudget& b, std::uint64_t n) {
  b.Validate();
  if (n == 0) return {};
  return {b.rho * static_cast<double>(n), b.omega};
}

double RequiredOmega(double rho, double delta) {
  Require(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
  if (rho == 0.0) return 1.0;
  return 1.0 + std::sqrt(std::log(1.0 / delta) / rho);
}

ApproxDpBudget TcdpToApproxDp(const TcdpBudget& b, double delta) {
  b.Validate();
  Require(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
  if (b.rho == 0.0) return {0.0, delta};
  const double needed = RequiredOmega(b.rho, delta);
  if (b.omega < needed) {
    Fail(ErrorCode::kTruncation, "conversion needs omega >= 1 + sqrt(ln(1/delta)/rho) = " +
                                     Num(needed) + ", have " + Num(b.omega));
  }
  return {b.rho + 2.0 * std::sqrt(b.rho * std::log(1.0 / delta)), delta};
}

double SigmaFormula(double G, std::uint64_t B, std::uint64_t T, std::uint64_t N,
                    const ApproxDpBudget& budget, const AccountantConstants& consts) {
  return consts.c2 * consts.sensitivity_factor * G * static_cast<double>(B) *
         std::sqrt(static_cast<double>(T) * std::log(1.0 / budget.delta)) /
         (budget.epsilon * static_cast<double>(N));
}

PipelineReport RunPipeline(double G, std::uint64_t B, std::uint64_t T, std::uint64_t N, double sigma,
                           double delta, const AccountantConstants& consts) {
  consts.Validate();
  Require(N >= 1 && B >= 1 && B <= N && T >= 1, "pipeline needs 1 <= B <= N and T >= 1");
  PipelineReport r;
  r.G = G;
  r.sensitivity = consts.sensitivity_factor * G;
  r.B = B;
  r.T = T;
  r.N = N;
  r.sigma = sigma;
  r.q = static_cast<double>(B) / static_cast<double>(N);
  r.per_step = GaussianTcdp(r.sensitivity, sigma);
  if (r.per_step.rho == 0.0) {
    r.amplified = r.per_step;
  } else if (B == N) {
    r.amplified = r.per_step;  // no subsampling
  } else {
    r.amplified = AmplifySubsample(r.per_step, r.q);
  }
  r.composed = ComposeN(r.amplified, T);
  r.required_omega = RequiredOmega(r.composed.rho, delta);
  r.spent = TcdpToApproxDp(r.composed, delta);
  return r;
}

std::vector<std::string> CalibrationViolations(std::uint64_t B, std::uint64_t T, std::uint64_t N,
                                               const ApproxDpBudget& budget,
                                               const AccountantConstants& consts) {
  std::vector<std::string> out;
  const double n = static_cast<double>(N);
  const double b = static_cast<double>(B);
  const double eps_cap = consts.c1 * b * b * static_cast<double>(T) / (n * n);
  if (budget.epsilon > eps_cap) {
    out.push_back("epsilon <= c1 B^2 T / N^2 fails: " + Num(budget.epsilon) + " > " + Num(eps_cap));
  }
  if (b > n / 10.0) out.push_back("B <= N/10 fails: B=" + std::to_string(B) + ", N=" + std::to_string(N));
  if (budget.delta > 0.5) out.push_back("delta <= 1/2 fails");
  return out;
}

Calibration CalibrateSigma(double G, std::uint64_t B, std::uint64_t T, std::uint64_t N,
                           const ApproxDpBudget& budget, const AccountantConstants& consts) {
  budget.Validate();
  consts.Validate();
  Require(G > 0.0 && std::isfinite(G), "calibration: G must be positive");
  Require(N >= 1 && B >= 1 && T >= 1, "calibration: B, T, N must be positive");
  const auto violations = CalibrationViolations(B, T, N, budget, consts);
  if (!violations.empty()) {
    std::string msg = "sigma calibration:";
    for (const auto& v : violations) msg += " " + v + ";";
    Fail(ErrorCode::kPrecondition, msg);
  }
  Calibration c;
  c.sigma = SigmaFormula(G, B, T, N, budget, consts);
  c.pipeline = RunPipeline(G, B, T, N, c.sigma, budget.delta, consts);
  if (c.pipeline.spent.epsilon > budget.epsilon) {
    Fail(ErrorCode::kCalibration, "pipeline epsilon " + Num(c.pipeline.spent.epsilon) +
                                      " exceeds target " + Num(budget.epsilon) +
                                      "; increase c2 (currently " + Num(consts.c2) + ")");
  }
  return c;
}

std::string PipelineJson(const PipelineReport& r, const ApproxDpBudget* target) {
  nlohmann::json j;
  j["inputs"] = {{"G", r.G}, {"sensitivity", r.sensitivity}, {"B", r.B},
                 {"T", r.T}, {"N", r.N},                    {"sigma", r.sigma}};
  j["q"] = r.q;
  j["gaussian"] = TcdpJson(r.per_step);
  j["amplified"] = TcdpJson(r.amplified);
  j["composed"] = TcdpJson(r.composed);
  j["required_omega"] = r.required_omega;
  j["spent"] = {{"epsilon", r.spent.epsilon}, {"delta", r.spent.delta}};
  if (target) {
    j["target"] = {{"epsilon", target->epsilon}, {"delta", target->delta}};
    j["certified"] = r.spent.epsilon <= target->epsilon;
  }
  return j.dump(2);
}

}  // namespace dpsco
