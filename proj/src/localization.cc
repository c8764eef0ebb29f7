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

#include "dpsco/localization.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpsco/error.h"

namespace dpsco {

std::pair<std::uint64_t, std::uint64_t> PhaseErmCounts(std::uint64_t N, int d,
                                                       const ApproxDpBudget& budget,
                                                       PhaseBranch* branch) {
  budget.Validate();
  Require(N >= 1 && d >= 1, "phase ERM schedule: need N, d >= 1");
  const double n = static_cast<double>(N);
  const double d4 = std::pow(static_cast<double>(d), 0.25);
  const double first = std::sqrt(n) * d4;
  const double second = n * budget.epsilon / (d4 * std::sqrt(std::log(1.0 / budget.delta)));
  if (branch) *branch = first <= second ? PhaseBranch::kSqrtN : PhaseBranch::kPrivacy;
  const std::uint64_t T =
      400 * static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::min(first, second))));
  const double t = static_cast<double>(T);
  const std::uint64_t B =
      static_cast<std::uint64_t>(std::ceil(n / t + n * std::sqrt(budget.epsilon / t)));
  return {T, B};
}

PrivateAcsaConfig PhaseErmSchedule(double G, std::uint64_t N, int d, const ApproxDpBudget& budget,
                                   double D_i, const AccountantConstants& consts,
                                   PhaseBranch* branch) {
  Require(D_i > 0.0, "phase ERM schedule: diameter must be positive");
  const auto [T, B] = PhaseErmCounts(N, d, budget, branch);
  PrivateAcsaConfig cfg;
  cfg.T = T;
  cfg.B = B;
  cfg.r = D_i / (static_cast<double>(T) * std::pow(static_cast<double>(d), 0.25));
  cfg.budget = budget;
  cfg.sigma = CalibrateSigma(G, B, T, N, budget, consts).sigma;
  return cfg;
}

LocalizationSchedule MakeSchedule(double G, double D, std::uint64_t N, int d,
                                  const ApproxDpBudget& budget, const AccountantConstants& consts) {
  budget.Validate();
  Require(N >= 2, "localization needs N >= 2");
  Require(G > 0.0 && D > 0.0 && d >= 1, "localization needs G, D, d positive");
  LocalizationSchedule s;
  const double n = static_cast<double>(N);
  s.eta = (D / G) * std::min(1.0 / std::sqrt(n),
                             budget.epsilon / std::sqrt(d * std::log(1.0 / budget.delta)));
  s.k = static_cast<int>(std::ceil(std::log2(n)));
  std::size_t offset = 0;
  for (int i = 1; i <= s.k; ++i) {
    LocalizationPhase p;
    p.i = i;
    p.eps = std::ldexp(budget.epsilon, -i);
    p.delta = std::ldexp(budget.delta, -i);
    p.N = N >> i;
    if (p.N == 0) continue;
    p.offset = offset;
    p.count = p.N;
    offset += p.count;
    p.eta = std::ldexp(s.eta, -5 * i);
    p.ball_radius = 2.0 * G * p.eta * static_cast<double>(p.N);
    p.lambda = 1.0 / (p.eta * static_cast<double>(p.N));
    const auto [T, B] = PhaseErmCounts(p.N, d, {p.eps, p.delta});
    p.runnable = CalibrationViolations(B, T, p.N, {p.eps, p.delta}, consts).empty();
    s.phases.push_back(p);
  }
  // Leftover samples, and the blocks of trailing phases that are too small to
  // run, go to the last runnable phase.
  auto last = std::find_if(s.phases.rbegin(), s.phases.rend(),
                           [](const LocalizationPhase& p) { return p.runnable; });
  if (last != s.phases.rend()) {
    last->count = N - last->offset;
    for (auto it = s.phases.rbegin(); it != last; ++it) it->count = 0;
  }
  return s;
}

SolveResult Localize(const LossFamily& family, const Dataset& data, const Domain& domain,
                     const Vector& w0, const ApproxDpBudget& budget,
                     const AccountantConstants& consts, std::uint64_t seed,
                     std::uint64_t stream_base) {
  budget.Validate();
  const std::uint64_t N = data.size();
  const int d = data.dim();
  SolveResult out;
  out.point = w0;
  if (N < 2) {
    PhaseRecord rec;
    rec.stage = "localize";
    rec.N = N;
    rec.skipped = true;
    rec.note = "fewer than 2 samples: start point returned";
    rec.start = w0;
    rec.point = w0;
    out.phases.push_back(std::move(rec));
    return out;
  }
  const double G = family.lipschitz_G;
  const LocalizationSchedule sched = MakeSchedule(G, domain.diameter(), N, d, budget, consts);
  for (const LocalizationPhase& p : sched.phases) {
    PhaseRecord rec;
    if (!p.runnable || p.count == 0) {
      rec.stage = "localize";
      rec.phase = p.i;
      rec.eps = p.eps;
      rec.delta = p.delta;
      rec.N = p.count;
      rec.ball_radius = p.ball_radius;
      rec.reg_lambda = p.lambda;
      rec.skipped = true;
      rec.note = "block too small for B <= N/10: phase skipped";
      rec.start = out.point;
      rec.point = out.point;
      out.phases.push_back(std::move(rec));
      continue;
    }
    const Dataset block = data.Slice(p.offset, p.count);
    const Domain Ki = domain.WithinBall(out.point, p.ball_radius);
    const ApproxDpBudget sub{p.eps, p.delta};
    SolveResult res;
    try {
      PrivateAcsaConfig cfg = PhaseErmSchedule(G, p.count, d, sub, Ki.diameter(), consts);
      cfg.mu = family.strong_mu + 2.0 * p.lambda;
      res = PrivateAcsa(family, block, Ki, out.point, cfg, consts, seed,
                        stream_base + static_cast<std::uint64_t>(p.i),
                        QuadraticOffset{p.lambda, out.point});
    } catch (const Error& e) {
      Rethrow(e, "localization phase " + std::to_string(p.i));
    }
    if (!Ki.Contains(res.point, 1e-8)) {
      Fail(ErrorCode::kNonConvergence,
           "localization phase " + std::to_string(p.i) + " output left K_i");
    }
    rec = std::move(res.phases.front());
    rec.stage = "localize";
    rec.phase = p.i;
    rec.ball_radius = p.ball_radius;
    rec.reg_lambda = p.lambda;
    out.point = res.point;
    out.gradient_count += res.gradient_count;
    out.spent.epsilon += res.spent.epsilon;
    out.spent.delta += res.spent.delta;
    out.phases.push_back(std::move(rec));
  }
  return out;
}

SolveResult ScoStrongly(const LossFamily& family, const Dataset& data, const Domain& domain,
                        const Vector& w0, const ApproxDpBudget& budget,
                        const AccountantConstants& consts, std::uint64_t seed,
                        std::optional<int> k_override) {
  const std::uint64_t N = data.size();
  const int k = k_override ? *k_override : DoublingPhases(N);
  Require(k >= 1 && k < 63, "wrapper phase count out of range");
  std::vector<std::size_t> offsets(static_cast<std::size_t>(k) + 1, 0);
  std::vector<std::size_t> counts(static_cast<std::size_t>(k) + 1, 0);
  std::size_t offset = 0;
  for (int i = 1; i <= k; ++i) {
    counts[i] = static_cast<std::size_t>(N >> (k + 1 - i));
    offsets[i] = offset;
    offset += counts[i];
  }
  PhaseSolver solver = [&](const Vector& start, const ApproxDpBudget& sub, int phase) {
    if (counts[phase] < 2) {
      SolveResult skipped;
      skipped.point = start;
      PhaseRecord rec;
      rec.stage = "localize";
      rec.eps = sub.epsilon;
      rec.delta = sub.delta;
      rec.N = counts[phase];
      rec.skipped = true;
      rec.note = "fewer than 2 samples: start point returned";
      rec.start = start;
      rec.point = start;
      skipped.phases.push_back(std::move(rec));
      return skipped;
    }
    const Dataset block = data.Slice(offsets[phase], counts[phase]);
    return Localize(family, block, domain, start, sub, consts, seed,
                    static_cast<std::uint64_t>(phase) << 8);
  };
  return DoublingReduction(solver, w0, budget, N, k);
}

}  // namespace dpsco
