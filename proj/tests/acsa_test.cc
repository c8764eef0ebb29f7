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
#include <limits>
#include <sstream>
#include <vector>

#include "dpsco/error.h"
#include "dpsco/sampling.h"
#include "grid_prox.h"
#include "gtest/gtest.h"

namespace dpsco {
namespace {

using test_util::GridProx;

TEST(AcsaStateTest, StepParameters) {
  AcsaState s = AcsaState::Start(Vector::Zero(2), 0.0, 1.0);
  EXPECT_DOUBLE_EQ(s.alpha, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.gamma, 2.0);
  double prev_gamma = s.gamma;
  for (std::uint64_t t = 2; t < 100; ++t) {
    s.SetIteration(t);
    EXPECT_GT(s.alpha, 0.0);
    EXPECT_LE(s.alpha, 1.0);
    EXPECT_LT(s.gamma, prev_gamma);
    prev_gamma = s.gamma;
  }
  EXPECT_THROW(AcsaState::Start(Vector::Zero(2), 0.0, 0.0), Error);
}

TEST(AcsaMdPointTest, FirstIterate) {
  AcsaState s = AcsaState::Start(Vector::Zero(1), 0.0, 1.0);
  s.omega_ag = Vector::Constant(1, 3.0);
  s.omega = Vector::Constant(1, 6.0);
  EXPECT_NEAR(AcsaMdPoint(s)[0], 3.0 / 3.0 + 2.0 * 6.0 / 3.0, 1e-15);
}

TEST(AcsaMdPointTest, ZeroMuCollapses) {
  AcsaState s = AcsaState::Start(Vector::Zero(2), 0.0, 5.0);
  s.SetIteration(7);
  s.omega_ag = Vector::Constant(2, 1.0);
  s.omega = Vector::Constant(2, -2.0);
  const Vector md = AcsaMdPoint(s);
  const Vector expected = (1.0 - s.alpha) * s.omega_ag + s.alpha * s.omega;
  EXPECT_LE((md - expected).norm(), 1e-14);
}

TEST(AcsaMdPointTest, CoefficientsSumToOne) {
  RandomStream rng(1, 0);
  for (int k = 0; k < 200; ++k) {
    AcsaState s = AcsaState::Start(Vector::Zero(1), 10.0 * rng.Uniform(), 0.01 + 100.0 * rng.Uniform());
    s.SetIteration(1 + rng.Index(1000));
    s.omega_ag = Vector::Constant(1, 1.0);
    s.omega = Vector::Constant(1, 1.0);
    ASSERT_NEAR(AcsaMdPoint(s)[0], 1.0, 1e-12);
  }
}

TEST(AcsaProxTest, ProjectedGradientStep) {
  const Domain k = Domain::MakeBox(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  AcsaState s = AcsaState::Start(Vector::Constant(1, 0.5), 0.0, 1.0);
  s.omega_md = s.omega;
  EXPECT_NEAR(AcsaProxStep(s, Vector::Constant(1, 3.0), {}, k)[0], 0.0, 1e-15);
  EXPECT_EQ(AcsaProxStep(s, Vector::Zero(1), {}, k)[0], 0.5);
}

TEST(AcsaProxTest, MatchesGridSearch) {
  RandomStream rng(2, 0);
  for (int inst = 0; inst < 20; ++inst) {
    const int d = inst % 2 == 0 ? 1 : 2;
    const Domain domain = inst % 4 < 2
                              ? Domain::MakeBox(Vector::Constant(d, -1.0), Vector::Constant(d, 1.0))
                              : Domain::MakeBall(Vector::Zero(d), 1.0);
    AcsaState s = AcsaState::Start(domain.Project(GaussianVector(d, 0.7, rng)), rng.Uniform(),
                                   0.2 + rng.Uniform());
    s.SetIteration(1 + rng.Index(20));
    s.omega_ag = domain.Project(GaussianVector(d, 0.7, rng));
    s.omega_md = AcsaMdPoint(s);
    const QuadraticOffset h{inst % 3 == 0 ? 0.0 : rng.Uniform(), GaussianVector(d, 1.0, rng)};
    // Large gradients push the unconstrained minimizer outside K.
    const Vector g = GaussianVector(d, inst < 10 ? 1.0 : 20.0, rng);
    const Vector closed = AcsaProxStep(s, g, h, domain);
    const Vector grid = GridProx(s, g, h, domain, -1.0, 1.0);
    EXPECT_LE((closed - grid).lpNorm<Eigen::Infinity>(), 1e-4 + 1e-12) << "instance " << inst;
  }
}

StochasticOracle ExactQuadraticOracle() {
  return {[](const Vector& w) { return Vector(2.0 * w); }, 1};
}

TEST(AcsaRunTest, QuadraticConverges) {
  RandomStream rng(3, 0);
  Vector w0 = GaussianVector(5, 1.0, rng);
  w0.normalize();
  const Domain domain = Domain::MakeBall(Vector::Zero(5), 2.0);
  const AcsaResult res = AcsaRun(ExactQuadraticOracle(), w0, {.T = 100, .mu = 2.0, .L = 2.0}, domain);
  EXPECT_LE(res.point.squaredNorm(), 1e-3);
  EXPECT_EQ(res.gradient_count, 100u);
}

// Smooth, not strongly convex: f(w) = 0.5 w' A w with eigenvalues in (0, 1].
double SmoothError(std::uint64_t T) {
  const int d = 10;
  Vector eig(d);
  for (int i = 0; i < d; ++i) eig[i] = std::pow(0.5, i);
  const Domain domain = Domain::MakeBall(Vector::Zero(d), 10.0);
  const StochasticOracle oracle{[eig](const Vector& w) { return Vector(eig.cwiseProduct(w)); }, 1};
  const AcsaResult res = AcsaRun(oracle, Vector::Ones(d), {.T = T, .mu = 0.0, .L = 1.0}, domain);
  return 0.5 * res.point.dot(eig.cwiseProduct(res.point));
}

TEST(AcsaRunTest, DeterministicRateUnderDoubling) {
  const double e200 = SmoothError(200);
  const double e400 = SmoothError(400);
  EXPECT_GE(e200 / e400, 3.0);
}

TEST(AcsaRunTest, DeterministicReplay) {
  const double a = SmoothError(57);
  const double b = SmoothError(57);
  EXPECT_EQ(a, b);
}

TEST(AcsaRunTest, GradientCountIsTimesBatch) {
  const Domain domain = Domain::MakeBall(Vector::Zero(3), 1.0);
  const StochasticOracle oracle{[](const Vector& w) { return Vector(w); }, 13};
  const AcsaResult res = AcsaRun(oracle, Vector::Zero(3), {.T = 77, .mu = 1.0, .L = 1.0}, domain);
  EXPECT_EQ(res.gradient_count, 77u * 13u);
}

TEST(AcsaRunTest, IteratesStayInDomainAndTrace) {
  const Domain domain = Domain::MakeBox(Vector::Constant(2, -0.1), Vector::Constant(2, 0.1));
  RandomStream rng(4, 0);
  const StochasticOracle oracle{[&rng](const Vector&) { return GaussianVector(2, 50.0, rng); }, 1};
  std::ostringstream trace;
  AcsaOptions opts{.T = 500, .mu = 0.5, .L = 1.0};
  opts.trace = &trace;
  opts.objective = [](const Vector& w) { return w.squaredNorm(); };
  const AcsaResult res = AcsaRun(oracle, Vector::Zero(2), opts, domain);
  EXPECT_TRUE(domain.Contains(res.point, 1e-12));
  std::istringstream lines(trace.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 501);
}

TEST(AcsaRunTest, OracleFailurePropagates) {
  const Domain domain = Domain::MakeBall(Vector::Zero(1), 1.0);
  const StochasticOracle oracle{[](const Vector&) -> Vector {
                                  Fail(ErrorCode::kPrecondition, "boom");
                                },
                                1};
  EXPECT_THROW(AcsaRun(oracle, Vector::Zero(1), {.T = 3, .mu = 0.0, .L = 1.0}, domain), Error);
}

}  // namespace
}  // namespace dpsco
