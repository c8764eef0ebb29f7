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

#include "dpsco/acsa.h"

#include <cmath>
#include <ostream>
#include <string>

#include "dpsco/error.h"

namespace dpsco {
namespace {

constexpr double kFeasibilityTol = 1e-8;

void CheckFeasible(const Domain& domain, const Vector& p, const char* what, std::uint64_t t) {
  if (!domain.Contains(p, kFeasibilityTol)) {
    Fail(ErrorCode::kNonConvergence,
         std::string("AC-SA iterate ") + what + " left K at t=" + std::to_string(t));
  }
}

}  // namespace

AcsaState AcsaState::Start(const Vector& w0, double mu, double L) {
  Require(L > 0.0 && std::isfinite(L), "AC-SA: L must be positive");
  Require(mu >= 0.0 && std::isfinite(mu), "AC-SA: mu must be nonnegative");
  AcsaState s;
  s.omega = w0;
  s.omega_ag = w0;
  s.omega_md = w0;
  s.mu = mu;
  s.L = L;
  s.SetIteration(1);
  return s;
}

void AcsaState::SetIteration(std::uint64_t iteration) {
  Require(iteration >= 1, "AC-SA: iterations start at 1");
  t = iteration;
  const double td = static_cast<double>(t);
  alpha = 2.0 / (td + 2.0);
  gamma = 4.0 * L / (td * (td + 1.0));
}

Vector AcsaMdPoint(const AcsaState& s) {
  const double a = s.alpha;
  const double denom = s.gamma + (1.0 - a * a) * s.mu;
  if (!(denom > 0.0)) Fail(ErrorCode::kConfiguration, "AC-SA: zero md-point denominator");
  const double w_ag = (1.0 - a) * (s.mu + s.gamma) / denom;
  const double w_prev = a * ((1.0 - a) * s.mu + s.gamma) / denom;
  return w_ag * s.omega_ag + w_prev * s.omega;
}

Vector AcsaProxStep(const AcsaState& s, const Vector& g, const QuadraticOffset& h,
                    const Domain& domain) {
  Require(h.coeff_lambda >= 0.0, "AC-SA prox: h must have nonnegative lambda");
  Require(g.size() == s.omega.size(), "AC-SA prox: gradient has wrong dimension");
  const double a = s.alpha;
  const double lambda = h.coeff_lambda;
  const double prev_weight = 2.0 * ((1.0 - a) * s.mu + s.gamma);
  Vector numer = (2.0 * a * s.mu) * s.omega_md + prev_weight * s.omega - a * g;
  if (lambda > 0.0 && h.center.size() != 0) numer += (2.0 * a * lambda) * h.center;
  const double denom = 2.0 * a * lambda + 2.0 * s.mu + 2.0 * s.gamma;
  return domain.Project(numer / denom);
}

AcsaResult AcsaRun(const StochasticOracle& oracle, const Vector& w0, const AcsaOptions& options,
                   const Domain& domain) {
  Require(options.T >= 1, "AC-SA: T must be >= 1");
  Require(static_cast<bool>(oracle.query), "AC-SA: oracle is empty");
  Require(w0.size() == domain.dim(), "AC-SA: start point has wrong dimension");
  CheckFeasible(domain, w0, "w0", 0);
  AcsaState s = AcsaState::Start(w0, 0.5 * options.mu, options.L);
  AcsaResult result;
  if (options.trace) *options.trace << "t,psi,step_norm\n";
  for (std::uint64_t t = 1; t <= options.T; ++t) {
    s.SetIteration(t);
    s.omega_md = AcsaMdPoint(s);
    CheckFeasible(domain, s.omega_md, "w_md", t);
    const Vector g = oracle.query(s.omega_md);
    result.gradient_count += oracle.batch_size;
    Vector next = AcsaProxStep(s, g, options.h, domain);
    CheckFeasible(domain, next, "w", t);
    s.omega_ag = s.alpha * next + (1.0 - s.alpha) * s.omega_ag;
    CheckFeasible(domain, s.omega_ag, "w_ag", t);
    if (options.trace) {
      *options.trace << t << ',';
      if (options.objective) *options.trace << options.objective(s.omega_ag) + options.h.Value(s.omega_ag);
      *options.trace << ',' << (next - s.omega).norm() << '\n';
    }
    s.omega = std::move(next);
  }
  result.point = std::move(s.omega_ag);
  return result;
}

}  // namespace dpsco
