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
#include <set>

#include "dpsco/error.h"
#include "dpsco/exact_oracle.h"
#include "dpsco/tasks.h"
#include "gtest/gtest.h"

namespace dpsco {
namespace {

// Measured once on this configuration, then frozen.
constexpr double kPhaseAccuracyConstant = 12.0;  // measured 11.65

TEST(LocalizationScheduleTest, WorkedExample) {
  const LocalizationSchedule s = MakeSchedule(1.0, 1.0, 1024, 4, {0.5, 0.01});
  EXPECT_DOUBLE_EQ(s.eta, 0.03125);
  EXPECT_EQ(s.k, 10);
  ASSERT_FALSE(s.phases.empty());
  const LocalizationPhase& p1 = s.phases.front();
  EXPECT_EQ(p1.i, 1);
  EXPECT_DOUBLE_EQ(p1.eps, 0.25);
  EXPECT_DOUBLE_EQ(p1.delta, 0.005);
  EXPECT_EQ(p1.N, 512u);
  EXPECT_DOUBLE_EQ(p1.eta, 0.03125 / 32.0);
  EXPECT_DOUBLE_EQ(p1.ball_radius, 2.0 * p1.eta * 512.0);
  EXPECT_DOUBLE_EQ(p1.lambda, 1.0 / (p1.eta * 512.0));
}

TEST(LocalizationScheduleTest, TwoSamplesGiveOnePhase) {
  const LocalizationSchedule s = MakeSchedule(1.0, 1.0, 2, 4, {0.5, 0.01});
  EXPECT_EQ(s.k, 1);
  ASSERT_EQ(s.phases.size(), 1u);
  EXPECT_EQ(s.phases[0].N, 1u);
}

TEST(LocalizationScheduleTest, BudgetsAndBlocks) {
  for (std::uint64_t N : {256u, 1000u, 1024u, 4096u, 5000u}) {
    const LocalizationSchedule s = MakeSchedule(1.0, 2.0, N, 4, {1.0, 1e-5});
    double eps = 0.0, delta = 0.0;
    std::uint64_t nominal = 0;
    std::size_t covered = 0;
    std::size_t next = 0;
    for (const LocalizationPhase& p : s.phases) {
      eps += p.eps;
      delta += p.delta;
      nominal += p.N;
      if (p.count == 0) continue;
      EXPECT_EQ(p.offset, next);
      next = p.offset + p.count;
      covered += p.count;
    }
    EXPECT_LT(eps, 1.0);
    EXPECT_LT(delta, 1e-5);
    EXPECT_LE(nominal, N);
    EXPECT_EQ(covered, N);
  }
}

TEST(LocalizationScheduleTest, RadiusShrinks) {
  const LocalizationSchedule s = MakeSchedule(1.0, 1.0, 1024, 4, {0.5, 0.01});
  for (std::size_t j = 1; j < s.phases.size(); ++j) {
    EXPECT_NEAR(s.phases[j - 1].ball_radius / s.phases[j].ball_radius, 64.0, 1e-9);
  }
}

TEST(LocalizationScheduleTest, PhaseErmExample) {
  PhaseBranch branch;
  const auto [T, B] = PhaseErmCounts(1024, 16, {0.5, 0.01}, &branch);
  EXPECT_EQ(T, 25600u);
  EXPECT_EQ(B, 5u);
  EXPECT_GE(B * T, 1024u);
  EXPECT_EQ(branch, PhaseBranch::kSqrtN);
  const PrivateAcsaConfig cfg = PhaseErmSchedule(1.0, 1024, 16, {0.5, 0.01}, 0.5, {});
  EXPECT_DOUBLE_EQ(cfg.r, 0.5 / (25600.0 * 2.0));
  EXPECT_GT(cfg.sigma, 0.0);
}

TEST(LocalizationScheduleTest, BranchFlips) {
  PhaseBranch branch;
  PhaseErmCounts(1024, 16, {0.01, 1e-5}, &branch);
  EXPECT_EQ(branch, PhaseBranch::kPrivacy);
  PhaseErmCounts(1 << 20, 4, {1.0, 1e-5}, &branch);
  EXPECT_EQ(branch, PhaseBranch::kSqrtN);
}

TEST(LocalizationScheduleTest, CountsCoverBlock) {
  for (std::uint64_t N : {64u, 256u, 1024u, 4096u}) {
    for (int d : {1, 4, 16, 64}) {
      for (double eps : {0.1, 0.5, 1.0}) {
        const auto [T, B] = PhaseErmCounts(N, d, {eps, 1e-5});
        EXPECT_GE(B * T, N);
      }
    }
  }
}

TEST(LocalizeTest, OutputsStayInsidePhaseBalls) {
  const Task task = MakeTask({.kind = TaskKind::kHinge, .N = 1024, .d = 4}, 11);
  const SolveResult res =
      Localize(task.family, task.data, task.domain, task.w0, {1.0, 1e-5}, {}, 12);
  std::uint64_t sum = 0;
  int ran = 0;
  for (const PhaseRecord& p : res.phases) {
    EXPECT_EQ(p.stage, "localize");
    if (p.skipped) continue;
    ++ran;
    sum += p.B * p.T;
    EXPECT_LE((p.point - p.start).norm(), p.ball_radius + 1e-8);
    EXPECT_TRUE(task.domain.Contains(p.point, 1e-8));
  }
  EXPECT_GT(ran, 0);
  EXPECT_EQ(sum, res.gradient_count);
  EXPECT_LE(res.spent.epsilon, 1.0);
  EXPECT_LE(res.spent.delta, 1e-5);
}

TEST(LocalizeTest, PhaseMinimizerInsideBall) {
  TaskOptions opts;
  opts.kind = TaskKind::kQuadratic;
  opts.N = 1024;
  opts.d = 4;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Task task = MakeTask(opts, seed);
    const LocalizationSchedule s =
        MakeSchedule(task.family.lipschitz_G, task.domain.diameter(), 1024, 4, {1.0, 1e-5});
    const SolveResult res =
        Localize(task.family, task.data, task.domain, task.w0, {1.0, 1e-5}, {}, seed);
    for (std::size_t j = 0; j < res.phases.size(); ++j) {
      const PhaseRecord& p = res.phases[j];
      if (p.skipped) continue;
      const LocalizationPhase& lp = s.phases[j];
      const Dataset block = task.data.Slice(lp.offset, lp.count);
      const ExactSolution hat =
          ExactErmOracle(task.family, block, task.domain, QuadraticOffset{lp.lambda, p.start});
      EXPECT_LE((hat.point - p.start).norm(), lp.ball_radius + 1e-9) << "phase " << lp.i;
    }
  }
}

TEST(ScoStronglyTest, PhaseLayout) {
  const Task task = MakeTask({.kind = TaskKind::kHinge, .N = 1024, .d = 4}, 13);
  const SolveResult res =
      ScoStrongly(task.family, task.data, task.domain, task.w0, {1.0, 1e-5}, {}, 14);
  std::set<int> outers;
  std::uint64_t sum = 0;
  for (const PhaseRecord& p : res.phases) {
    outers.insert(p.outer);
    if (!p.skipped) sum += p.B * p.T;
  }
  EXPECT_EQ(outers, (std::set<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(sum, res.gradient_count);
  EXPECT_LE(res.spent.epsilon, 1.0);
  EXPECT_LE(res.spent.delta, 1e-5);
}

TEST(ScoStronglyTest, SinglePhaseIsLocalizeOnHalf) {
  const Task task = MakeTask({.kind = TaskKind::kHinge, .N = 512, .d = 4}, 15);
  const SolveResult wrapped =
      ScoStrongly(task.family, task.data, task.domain, task.w0, {1.0, 1e-5}, {}, 16, 1);
  const SolveResult direct = Localize(task.family, task.data.Slice(0, 256), task.domain, task.w0,
                                      {0.5, 5e-6}, {}, 16, 1u << 8);
  EXPECT_EQ(wrapped.point, direct.point);
  EXPECT_EQ(wrapped.gradient_count, direct.gradient_count);
}

TEST(LocalizeTest, TooFewSamples) {
  const Task task = MakeTask({.kind = TaskKind::kHinge, .N = 1, .d = 2}, 17);
  const SolveResult res =
      Localize(task.family, task.data, task.domain, task.w0, {1.0, 1e-5}, {}, 1);
  EXPECT_EQ(res.point, task.w0);
  EXPECT_EQ(res.gradient_count, 0u);
}

TEST(LocalizeTest, PhaseAccuracyOnQuadratics) {
  TaskOptions opts;
  opts.kind = TaskKind::kQuadratic;
  opts.N = 1024;
  opts.d = 4;
  const ApproxDpBudget budget{1.0, 1e-5};
  std::vector<double> sq_err;
  std::vector<double> bound;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Task task = MakeTask(opts, seed);
    const double G = task.family.lipschitz_G;
    const LocalizationSchedule s = MakeSchedule(G, task.domain.diameter(), 1024, 4, budget);
    const SolveResult res = Localize(task.family, task.data, task.domain, task.w0, budget, {}, seed);
    if (sq_err.empty()) {
      sq_err.assign(res.phases.size(), 0.0);
      bound.assign(res.phases.size(), 0.0);
    }
    for (std::size_t j = 0; j < res.phases.size(); ++j) {
      const PhaseRecord& p = res.phases[j];
      if (p.skipped) continue;
      const LocalizationPhase& lp = s.phases[j];
      const Domain Ki = task.domain.WithinBall(p.start, lp.ball_radius);
      const ExactSolution hat = ExactErmOracle(task.family, task.data.Slice(lp.offset, lp.count),
                                               Ki, QuadraticOffset{lp.lambda, p.start});
      sq_err[j] += (p.point - hat.point).squaredNorm() / 50.0;
      bound[j] = G * G * lp.eta * lp.eta *
                 (4.0 * std::log(1.0 / lp.delta) / (lp.eps * lp.eps) + static_cast<double>(lp.N));
    }
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < sq_err.size(); ++j) {
    if (bound[j] > 0.0) worst = std::max(worst, sq_err[j] / bound[j]);
  }
  EXPECT_LE(worst, kPhaseAccuracyConstant);
}

}  // namespace
}  // namespace dpsco
