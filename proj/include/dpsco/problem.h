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

#ifndef DPSCO_PROBLEM_H_
#define DPSCO_PROBLEM_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dpsco {

using Vector = Eigen::VectorXd;

// One sample record: a feature vector and a scalar label.
struct SampleView {
  Eigen::Ref<const Vector> x;
  double y;
};

// Samples stored column-wise; column i is the feature vector of sample i.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, Vector labels);

  std::size_t size() const { return static_cast<std::size_t>(labels_.size()); }
  int dim() const { return static_cast<int>(features_.rows()); }

  SampleView operator[](std::size_t i) const {
    return {features_.col(static_cast<Eigen::Index>(i)),
            labels_[static_cast<Eigen::Index>(i)]};
  }

  const Eigen::MatrixXd& features() const { return features_; }
  const Vector& labels() const { return labels_; }

  // Contiguous block [offset, offset + count).
  Dataset Slice(std::size_t offset, std::size_t count) const;

  // Largest feature norm over all samples.
  double MaxFeatureNorm() const;

 private:
  Eigen::MatrixXd features_;
  Vector labels_;
};

// CSV with one sample per row: features then label. Lines starting with '#'
// and blank lines are skipped.
Dataset LoadCsvDataset(const std::string& path);
void SaveCsvDataset(const Dataset& data, const std::string& path);

// coeff_lambda * ||w - center||^2. An empty center means the origin.
struct QuadraticOffset {
  double coeff_lambda = 0.0;
  Vector center;

  double Value(const Vector& w) const;
  // Adds the gradient 2 * lambda * (w - center) into `out`.
  void AddGradient(const Vector& w, Vector& out) const;
  // Modulus under the f(v) >= f(u) + <g, v-u> + (mu/2)||v-u||^2 convention.
  double StrongConvexity() const { return 2.0 * coeff_lambda; }
};

enum class LossKind { kHinge, kQuadratic, kDistance, kLinear, kCustom };

// A family {f(., x)} of convex losses indexed by sample records.
struct LossFamily {
  using ValueFn = std::function<double(const Vector&, const SampleView&)>;
  // Adds scale * (a subgradient of f(., x) at w) into the accumulator.
  using SubgradFn = std::function<void(const Vector&, const SampleView&,
                                       double scale, Vector& accumulator)>;

  std::string name;
  LossKind kind = LossKind::kCustom;
  ValueFn value;
  SubgradFn add_subgrad;
  double lipschitz_G = 0.0;
  double strong_mu = 0.0;
  // Per-kind shape parameter (the quadratic's scale s in s||w - x||^2).
  double shape = 1.0;
  // Offsets folded in by Regularize(), kept so exact oracles see the structure.
  std::vector<QuadraticOffset> offsets;

  Vector Subgrad(const Vector& w, const SampleView& sample) const;
};

enum class DomainKind { kBall, kBox };

// The feasible set K: a Euclidean ball or an axis-aligned box, optionally
// intersected with one extra Euclidean ball (the localization constraint).
class Domain {
 public:
  struct Ball {
    Vector center;
    double radius = 0.0;
  };

  static Domain MakeBall(Vector center, double radius, double expansion_r = 0.0);
  static Domain MakeBox(Vector lo, Vector hi, double expansion_r = 0.0);

  // K intersected with the ball B(center, radius).
  Domain WithinBall(Vector center, double radius) const;

  DomainKind kind() const { return kind_; }
  int dim() const;
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const std::optional<Ball>& restriction() const { return restriction_; }
  double expansion_r() const { return expansion_r_; }

  // Supremum distance between two members (an upper bound when restricted).
  double diameter() const;

  // Euclidean projection. With a restriction the projection onto the
  // intersection is computed by Dykstra alternation to a 1e-10 fixed point.
  Vector Project(const Vector& p) const;
  bool Contains(const Vector& p, double tol = 1e-9) const;

  // sup over w in K_r of ||w - from||.
  double MaxDistanceInExpansion(const Vector& from) const;

  // A point strictly inside K (and inside the restriction, when present).
  Vector InteriorPoint() const;

 private:
  Domain() = default;
  Vector ProjectBase(const Vector& p) const;
  bool BaseContains(const Vector& p, double tol) const;

  DomainKind kind_ = DomainKind::kBall;
  Vector center_;
  double radius_ = 0.0;
  Vector lo_, hi_;
  double expansion_r_ = 0.0;
  std::optional<Ball> restriction_;
};

Vector ProjectOntoBall(const Vector& p, const Vector& center, double radius);

// Hinge loss max(0, 1 - y<w, x>) for samples with ||x|| <= feature_bound.
// The Lipschitz constant is feature_bound.
LossFamily HingeFamily(double feature_bound);

// scale * ||w - x||^2 (label ignored). Lipschitz over K_r is
// 2 * scale * (sup_{w in K_r} ||w|| + feature_bound); strongly convex with
// modulus 2 * scale.
LossFamily QuadraticFamily(double scale, double feature_bound,
                           const Domain& domain);

// ||w - x||_2 (label ignored); 1-Lipschitz, not differentiable at w = x.
LossFamily DistanceFamily();

// -y <w, x>; Lipschitz constant feature_bound.
LossFamily LinearFamily(double feature_bound);

// Adds the offset to every per-sample loss. strong_mu grows by
// 2 * coeff_lambda and lipschitz_G by 2 * coeff_lambda times the largest
// distance from the offset center over K_r.
LossFamily Regularize(const LossFamily& family, const QuadraticOffset& offset,
                      const Domain& domain);

// (1/N) sum_i f(w, x_i).
double EmpiricalRisk(const LossFamily& family, const Dataset& data,
                     const Vector& w);
// (1/N) sum_i subgrad f(w, x_i).
Vector EmpiricalSubgrad(const LossFamily& family, const Dataset& data,
                        const Vector& w);

}  // namespace dpsco

#endif  // DPSCO_PROBLEM_H_
