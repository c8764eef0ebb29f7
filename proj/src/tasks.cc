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

#include "dpsco/tasks.h"

#include <cmath>

#include "dpsco/error.h"

namespace dpsco {

std::string_view TaskName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kHinge:
      return "hinge";
    case TaskKind::kStronglyConvexHinge:
      return "strongly-convex-hinge";
    case TaskKind::kQuadratic:
      return "quadratic";
  }
  return "unknown";
}

std::optional<TaskKind> ParseTask(std::string_view name) {
  for (TaskKind k : {TaskKind::kHinge, TaskKind::kStronglyConvexHinge, TaskKind::kQuadratic}) {
    if (TaskName(k) == name) return k;
  }
  return std::nullopt;
}

Dataset SamplePlantedHinge(std::uint64_t n, const Vector& u, double noise, RandomStream& rng) {
  Require(n >= 1, "hinge sampler: n must be positive");
  Require(noise >= 0.0 && noise <= 0.5, "hinge sampler: noise must lie in [0, 1/2]");
  const Eigen::Index d = u.size();
  Eigen::MatrixXd X(d, static_cast<Eigen::Index>(n));
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(j, i) = rng.Normal();
    X.col(i).normalize();
    double label = u.dot(X.col(i)) >= 0.0 ? 1.0 : -1.0;
    if (rng.Uniform() < noise) label = -label;
    y[i] = label;
  }
  return Dataset(std::move(X), std::move(y));
}

Dataset Task::Sample(std::uint64_t n, RandomStream& rng) const {
  if (options.kind == TaskKind::kQuadratic) {
    const Eigen::Index d = planted.size();
    Eigen::MatrixXd X(d, static_cast<Eigen::Index>(n));
    Vector point(d);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      UniformBallPointInto(options.quad_spread, rng, point);
      X.col(i) = planted + point;
    }
    return Dataset(std::move(X), Vector::Zero(static_cast<Eigen::Index>(n)));
  }
  return SamplePlantedHinge(n, planted, options.label_noise, rng);
}

Task MakeTask(const TaskOptions& options, std::uint64_t seed) {
  Require(options.N >= 1 && options.d >= 1, "task: N and d must be positive");
  Require(options.domain_radius > 0.0, "task: domain radius must be positive");
  RandomStream rng = RandomStream::For(seed, StreamRole::kData);
  Vector u(options.d);
  for (int j = 0; j < options.d; ++j) u[j] = rng.Normal();
  u.normalize();

  const Vector origin = Vector::Zero(options.d);
  Domain domain = Domain::MakeBall(origin, options.domain_radius, options.expansion_r);
  LossFamily family;
  Vector planted = u;
  switch (options.kind) {
    case TaskKind::kHinge:
      family = HingeFamily(1.0);
      break;
    case TaskKind::kStronglyConvexHinge:
      Require(options.reg_lambda > 0.0, "task: strongly convex hinge needs reg_lambda > 0");
      family = Regularize(HingeFamily(1.0), QuadraticOffset{options.reg_lambda, options.reg_offset * u},
                          domain);
      break;
    case TaskKind::kQuadratic:
      planted = options.quad_mean_norm * u;
      family = QuadraticFamily(options.quad_scale, options.quad_mean_norm + options.quad_spread, domain);
      break;
  }
  Vector w0 = options.start ? *options.start : domain.center();
  Require(w0.size() == options.d && domain.Contains(w0), "task: start point must lie in K");
  TaskOptions opts = options;
  opts.start = w0;
  // Sample() only reads options and planted, so a one-sample placeholder is
  // replaced right away.
  Task task{opts, planted, std::move(family), std::move(domain), std::move(w0),
            Dataset(Eigen::MatrixXd::Zero(options.d, 1), Vector::Zero(1))};
  task.data = task.Sample(options.N, rng);
  return task;
}

}  // namespace dpsco
