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

#ifndef DPSCO_SAMPLING_H_
#define DPSCO_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dpsco/problem.h"

namespace dpsco {

// Stream ids are partitioned by role so that, e.g., changing the batch size
// never perturbs the noise sequence.
enum class StreamRole : std::uint64_t {
  kNoise = 1,
  kSubsample = 2,
  kSmoothing = 3,
  kTrial = 4,
  kData = 5,
  kEvaluation = 6,
};

// A reproducible random substream identified by (seed, stream_id).
// Single consumer; not thread-safe.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  // Stream for `role`, sub-indexed (phase, trial, ...) by `index`.
  static RandomStream For(std::uint64_t seed, StreamRole role, std::uint64_t index = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double Normal() { return normal_(engine_); }
  // Uniform on the open interval (0, 1).
  double Uniform();
  // Uniform on {0, ..., n - 1}.
  std::size_t Index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// d independent N(0, sigma^2) coordinates.
Vector GaussianVector(int d, double sigma, RandomStream& rng);
// Adds N(0, sigma^2 I) noise in place.
void AddGaussianNoise(Vector& v, double sigma, RandomStream& rng);

// Uniform on the l2 ball {y : ||y|| <= r}: a normalized Gaussian direction
// scaled by r * U^(1/d).
Vector UniformBallPoint(int d, double r, RandomStream& rng);
void UniformBallPointInto(double r, RandomStream& rng, Vector& out);

// Uniformly random size-B subset of {0, ..., N-1}.
std::vector<std::size_t> SubsampleWithoutReplacement(std::size_t n, std::size_t b,
                                                     RandomStream& rng);

// Reusable partial Fisher-Yates sampler: O(B) per draw after O(N) setup.
// The pool stays a permutation between draws, so every draw is a uniform
// B-subset regardless of history.
class Subsampler {
 public:
  explicit Subsampler(std::size_t n);

  std::span<const std::size_t> Draw(std::size_t b, RandomStream& rng);
  std::size_t population() const { return pool_.size(); }

 private:
  std::vector<std::size_t> pool_;
};

}  // namespace dpsco

#endif  // DPSCO_SAMPLING_H_
