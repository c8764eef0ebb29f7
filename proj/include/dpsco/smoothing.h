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

#ifndef DPSCO_SMOOTHING_H_
#define DPSCO_SMOOTHING_H_

#include <cstddef>
#include <cstdint>

#include "dpsco/problem.h"
#include "dpsco/sampling.h"

namespace dpsco {

// Parameters of the subsampled, ball-perturbed, Gaussian-noised subgradient
// oracle for the smoothed empirical loss
//   F_r(w) = (1/N) sum_i E_{y ~ Unif(B(0, r))} f(w + y, x_i).
struct SmoothedOracleConfig {
  double radius_r = 0.0;
  std::size_t batch_B = 1;
  double noise_sigma = 0.0;
  const Dataset& data;
  const LossFamily& family;
  const Domain& domain;

  // Throws kInvalidInput unless radius_r <= domain.expansion_r and
  // 1 <= batch_B <= N.
  void Validate() const;
};

// One independent stream per role.
struct OracleStreams {
  RandomStream noise;
  RandomStream subsample;
  RandomStream smoothing;

  static OracleStreams For(std::uint64_t seed, std::uint64_t index = 0);
};

// Stateful oracle: owns the subsampling pool and scratch buffers.
class SmoothedOracle {
 public:
  SmoothedOracle(const SmoothedOracleConfig& cfg, OracleStreams streams);

  // (sum_{i in S} subgrad f(w + y, x_i) + v) / B with one shared y ~ n_r, a
  // fresh size-B subset S and v ~ N(0, sigma^2 I). Throws kPrecondition when
  // w lies outside K.
  Vector Query(const Vector& w);

  std::size_t batch_size() const { return cfg_.batch_B; }
  const SmoothedOracleConfig& config() const { return cfg_; }

 private:
  SmoothedOracleConfig cfg_;
  OracleStreams streams_;
  Subsampler sampler_;
  Vector shift_;
  Vector point_;
};

// Single oracle call with a throwaway subsampling pool.
Vector SmoothedStochasticSubgrad(const SmoothedOracleConfig& cfg, const Vector& w,
                                 OracleStreams& streams);

struct McEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
};

// Monte-Carlo estimate of F_r(w) from n_mc ball draws, each evaluating the
// full empirical loss at w + y.
McEstimate McSmoothedValue(const SmoothedOracleConfig& cfg, const Vector& w,
                           std::size_t n_mc, RandomStream& rng);

// Unbiased Monte-Carlo estimate of grad F_r(w) from n_draws (y, x_i) pairs
// with x_i uniform over the dataset.
Vector McSmoothedGradient(const SmoothedOracleConfig& cfg, const Vector& w,
                          std::size_t n_draws, RandomStream& rng);

}  // namespace dpsco

#endif  // DPSCO_SMOOTHING_H_
