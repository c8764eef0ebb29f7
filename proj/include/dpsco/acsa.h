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

#ifndef DPSCO_ACSA_H_
#define DPSCO_ACSA_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>

#include "dpsco/problem.h"

namespace dpsco {

// Iterate triple of accelerated stochastic approximation entering iteration
// t: omega = w_{t-1}, omega_ag = w^ag_{t-1}, omega_md = w^md_t.
struct AcsaState {
  std::uint64_t t = 1;
  Vector omega;
  Vector omega_ag;
  Vector omega_md;
  double alpha = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double L = 0.0;

  static AcsaState Start(const Vector& w0, double mu, double L);
  // Sets t and the step parameters alpha_t = 2/(t+2), gamma_t = 4L/(t(t+1)).
  void SetIteration(std::uint64_t iteration);
};

// Convex combination of omega_ag and omega with weights
// (1-a)(mu+g)/(g+(1-a^2)mu) and a((1-a)mu+g)/(g+(1-a^2)mu).
Vector AcsaMdPoint(const AcsaState& state);

// Closed-form minimizer over K of
//   a[<g, w> + h(w) + mu||w_md - w||^2] + ((1-a)mu + gamma)||w_{t-1} - w||^2.
// The objective is an isotropic quadratic plus the indicator of K, so the
// answer is the projection of the unconstrained minimizer.
Vector AcsaProxStep(const AcsaState& state, const Vector& g, const QuadraticOffset& h,
                    const Domain& domain);

// A stochastic first-order oracle; each query costs batch_size gradients.
struct StochasticOracle {
  std::function<Vector(const Vector&)> query;
  std::size_t batch_size = 1;
};

struct AcsaOptions {
  std::uint64_t T = 1;
  // Strong convexity of the objective in the (mu/2)||.||^2 convention used by
  // LossFamily. The iteration's prox terms are unhalved, so the state gets
  // mu / 2.
  double mu = 0.0;
  double L = 1.0;
  QuadraticOffset h;
  // Optional CSV trace sink: t, psi, step_norm. psi uses `objective` on the
  // aggregate iterate plus h, or is empty when no objective is given.
  std::ostream* trace = nullptr;
  std::function<double(const Vector&)> objective;
};

struct AcsaResult {
  Vector point;  // w^ag_T
  std::uint64_t gradient_count = 0;
};

AcsaResult AcsaRun(const StochasticOracle& oracle, const Vector& w0, const AcsaOptions& options,
                   const Domain& domain);

}  // namespace dpsco

#endif  // DPSCO_ACSA_H_
