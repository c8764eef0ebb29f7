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

#ifndef DPSCO_EXACT_ORACLE_H_
#define DPSCO_EXACT_ORACLE_H_

#include <cstdint>
#include <string>

#include "dpsco/problem.h"

namespace dpsco {

struct ExactSolution {
  Vector point;
  double value = 0.0;
  // Upper bound on value - min, when certified.
  double gap = 0.0;
  bool certified = false;
  std::string method;
};

struct ExactOracleOptions {
  double gap_tolerance = 1e-9;
  std::uint64_t subgradient_iterations = 1000000;
};

// Non-private minimizer of (1/N) sum f(w, x_i) + extra(w) over the domain.
// Hinge losses use a primal log-barrier method on the epigraph form, with the
// barrier duality gap as certificate. Quadratic losses use the closed form.
// Anything else falls back to a deterministic projected subgradient method
// whose result is flagged as uncertified.
ExactSolution ExactErmOracle(const LossFamily& family, const Dataset& data, const Domain& domain,
                             const QuadraticOffset& extra = {},
                             const ExactOracleOptions& options = {});

ExactSolution HingeBarrierSolve(const LossFamily& family, const Dataset& data,
                                const Domain& domain, const QuadraticOffset& extra,
                                const ExactOracleOptions& options);
ExactSolution QuadraticClosedForm(const LossFamily& family, const Dataset& data,
                                  const Domain& domain, const QuadraticOffset& extra);
ExactSolution SubgradientSolve(const LossFamily& family, const Dataset& data,
                               const Domain& domain, const QuadraticOffset& extra,
                               std::uint64_t iterations);

}  // namespace dpsco

#endif  // DPSCO_EXACT_ORACLE_H_
