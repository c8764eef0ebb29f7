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

#include "dpsco/smoothing.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dpsco/error.h"

namespace dpsco {

void SmoothedOracleConfig::Validate() const {
  Require(radius_r >= 0.0, "smoothing radius must be nonnegative");
  Require(radius_r <= domain.expansion_r() + 1e-15,
          "smoothing radius exceeds the domain expansion radius");
  Require(batch_B >= 1 && batch_B <= data.size(), "batch size must satisfy 1 <= B <= N");
  Require(noise_sigma >= 0.0 && std::isfinite(noise_sigma), "noise sigma must be >= 0");
  Require(data.dim() == domain.dim(), "dataset and domain dimensions differ");
}

OracleStreams OracleStreams::For(std::uint64_t seed, std::uint64_t index) {
  return {RandomStream::For(seed, StreamRole::kNoise, index),
          RandomStream::For(seed, StreamRole::kSubsample, index),
          RandomStream::For(seed, StreamRole::kSmoothing, index)};
}

SmoothedOracle::SmoothedOracle(const SmoothedOracleConfig& cfg, OracleStreams streams)
    : cfg_(cfg),
      streams_(std::move(streams)),
      sampler_(cfg.data.size()),
      shift_(cfg.domain.dim()),
      point_(cfg.domain.dim()) {
  cfg_.Validate();
}

namespace {

// Shared body of the oracle: `draw` yields the batch indices.
template <typename DrawFn>
Vector OracleCall(const SmoothedOracleConfig& cfg, const Vector& w, OracleStreams& streams,
                  Vector& shift, Vector& point, DrawFn draw) {
  if (!cfg.domain.Contains(w, 1e-8)) {
    Fail(ErrorCode::kPrecondition, "smoothed oracle queried outside K");
  }
  UniformBallPointInto(cfg.radius_r, streams.smoothing, shift);
  point = w + shift;
  Vector g = Vector::Zero(w.size());
  const std::size_t n = cfg.data.size();
  if (cfg.batch_B == n) {
    // Only one subset exists; keep index order so the sum is reproducible.
    for (std::size_t i = 0; i < n; ++i) cfg.family.add_subgrad(point, cfg.data[i], 1.0, g);
  } else {
    for (std::size_t i : draw()) cfg.family.add_subgrad(point, cfg.data[i], 1.0, g);
  }
  AddGaussianNoise(g, cfg.noise_sigma, streams.noise);
  g /= static_cast<double>(cfg.batch_B);
  return g;
}

}  // namespace

Vector SmoothedOracle::Query(const Vector& w) {
  return OracleCall(cfg_, w, streams_, shift_, point_,
                    [&] { return sampler_.Draw(cfg_.batch_B, streams_.subsample); });
}

Vector SmoothedStochasticSubgrad(const SmoothedOracleConfig& cfg, const Vector& w,
                                 OracleStreams& streams) {
  cfg.Validate();
  Vector shift(w.size()), point(w.size());
  return OracleCall(cfg, w, streams, shift, point, [&] {
    return SubsampleWithoutReplacement(cfg.data.size(), cfg.batch_B, streams.subsample);
  });
}

McEstimate McSmoothedValue(const SmoothedOracleConfig& cfg, const Vector& w,
                           std::size_t n_mc, RandomStream& rng) {
  cfg.Validate();
  Require(n_mc >= 2, "mc_smoothed_value: need n_mc >= 2");
  Vector shift(w.size());
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < n_mc; ++k) {
    UniformBallPointInto(cfg.radius_r, rng, shift);
    const double v = EmpiricalRisk(cfg.family, cfg.data, w + shift);
    // Welford update.
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(n_mc);
  const double var = m2 / (n - 1.0);
  return {mean, std::sqrt(std::max(0.0, var) / n)};
}

Vector McSmoothedGradient(const SmoothedOracleConfig& cfg, const Vector& w,
                          std::size_t n_draws, RandomStream& rng) {
  cfg.Validate();
  Require(n_draws >= 1, "mc gradient: need at least one draw");
  Vector shift(w.size());
  Vector point(w.size());
  Vector g = Vector::Zero(w.size());
  for (std::size_t k = 0; k < n_draws; ++k) {
    UniformBallPointInto(cfg.radius_r, rng, shift);
    point = w + shift;
    cfg.family.add_subgrad(point, cfg.data[rng.Index(cfg.data.size())], 1.0, g);
  }
  return g / static_cast<double>(n_draws);
}

}  // namespace dpsco
