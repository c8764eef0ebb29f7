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

#include "dpsco/sampling.h"

#include <cmath>
#include <utility>

#include "dpsco/error.h"

namespace dpsco {
namespace {

std::mt19937_64 SeededEngine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(SeededEngine(seed, stream_id)) {}

RandomStream RandomStream::For(std::uint64_t seed, StreamRole role, std::uint64_t index) {
  return RandomStream(seed, (static_cast<std::uint64_t>(role) << 40) | index);
}

double RandomStream::Uniform() {
  // 53 random bits, shifted off zero.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::size_t RandomStream::Index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

Vector GaussianVector(int d, double sigma, RandomStream& rng) {
  Require(d >= 1, "gaussian_vector: dimension must be >= 1");
  Require(sigma >= 0.0, "gaussian_vector: sigma must be nonnegative");
  Vector v = Vector::Zero(d);
  AddGaussianNoise(v, sigma, rng);
  return v;
}

void AddGaussianNoise(Vector& v, double sigma, RandomStream& rng) {
  Require(sigma >= 0.0, "gaussian noise: sigma must be nonnegative");
  if (sigma == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += sigma * rng.Normal();
}

void UniformBallPointInto(double r, RandomStream& rng, Vector& out) {
  Require(r >= 0.0, "uniform_ball_point: radius must be nonnegative");
  if (r == 0.0) {
    out.setZero();
    return;
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      out[i] = rng.Normal();
      norm2 += out[i] * out[i];
    }
  } while (norm2 == 0.0);
  const double d = static_cast<double>(out.size());
  const double radius = r * std::pow(rng.Uniform(), 1.0 / d);
  out *= radius / std::sqrt(norm2);
}

Vector UniformBallPoint(int d, double r, RandomStream& rng) {
  Require(d >= 1, "uniform_ball_point: dimension must be >= 1");
  Vector v(d);
  UniformBallPointInto(r, rng, v);
  return v;
}

Subsampler::Subsampler(std::size_t n) : pool_(n) {
  Require(n >= 1, "subsampler: population must be >= 1");
  for (std::size_t i = 0; i < n; ++i) pool_[i] = i;
}

std::span<const std::size_t> Subsampler::Draw(std::size_t b, RandomStream& rng) {
  Require(b >= 1 && b <= pool_.size(), "subsample: need 1 <= B <= N");
  const std::size_t n = pool_.size();
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t j = i + rng.Index(n - i);
    std::swap(pool_[i], pool_[j]);
  }
  return {pool_.data(), b};
}

std::vector<std::size_t> SubsampleWithoutReplacement(std::size_t n, std::size_t b,
                                                     RandomStream& rng) {
  Require(n >= 1, "subsample: N must be >= 1");
  Require(b >= 1 && b <= n, "subsample: need 1 <= B <= N");
  Subsampler sampler(n);
  const auto picked = sampler.Draw(b, rng);
  return {picked.begin(), picked.end()};
}

}  // namespace dpsco
