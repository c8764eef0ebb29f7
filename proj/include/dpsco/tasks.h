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

#ifndef DPSCO_TASKS_H_
#define DPSCO_TASKS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dpsco/problem.h"
#include "dpsco/sampling.h"

namespace dpsco {

enum class TaskKind { kHinge, kStronglyConvexHinge, kQuadratic };

std::string_view TaskName(TaskKind kind);
std::optional<TaskKind> ParseTask(std::string_view name);

struct TaskOptions {
  TaskKind kind = TaskKind::kHinge;
  std::uint64_t N = 1024;
  int d = 16;
  // Probability of flipping a planted hinge label.
  double label_noise = 0.1;
  // K is the ball of this radius around the origin.
  double domain_radius = 1.0;
  double expansion_r = 0.5;
  // Strongly convex hinge: lambda ||w - reg_center||^2 is added to every loss;
  // the center is reg_offset times the planted direction.
  double reg_lambda = 0.05;
  double reg_offset = 0.0;
  // Quadratic: scale s in s ||w - x||^2, samples x = m + Unif(B(0, quad_spread)).
  double quad_scale = 0.5;
  double quad_mean_norm = 0.5;
  double quad_spread = 0.5;
  // Start point; the center of K when absent.
  std::optional<Vector> start;
};

// A synthetic problem instance together with its data-generating process.
struct Task {
  TaskOptions options;
  Vector planted;  // unit planted direction (hinge) or the mean m (quadratic)
  LossFamily family;
  Domain domain;
  Vector w0;
  Dataset data;

  // n fresh samples from the population.
  Dataset Sample(std::uint64_t n, RandomStream& rng) const;
};

Task MakeTask(const TaskOptions& options, std::uint64_t seed);

// Features uniform on the unit sphere; labels sign(<u, x>) flipped with
// probability `noise`.
Dataset SamplePlantedHinge(std::uint64_t n, const Vector& u, double noise, RandomStream& rng);

}  // namespace dpsco

#endif  // DPSCO_TASKS_H_
