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

#include "dpsco/problem.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "dpsco/error.h"

namespace dpsco {
namespace {

constexpr double kDykstraTolerance = 1e-10;
constexpr int kDykstraMaxIterations = 100000;

bool AllFinite(const Vector& p) { return p.allFinite(); }

}  // namespace

Dataset::Dataset(Eigen::MatrixXd features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  Require(features_.cols() == labels_.size(),
          "dataset: feature columns and labels differ in count");
  Require(labels_.size() >= 1, "dataset: needs at least one sample");
}

Dataset Dataset::Slice(std::size_t offset, std::size_t count) const {
  Require(count >= 1 && offset + count <= size(),
          "dataset slice out of range");
  const auto off = static_cast<Eigen::Index>(offset);
  const auto n = static_cast<Eigen::Index>(count);
  return Dataset(features_.middleCols(off, n), labels_.segment(off, n));
}

double Dataset::MaxFeatureNorm() const {
  return features_.colwise().norm().maxCoeff();
}

Dataset LoadCsvDataset(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), "cannot open dataset file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        Fail(ErrorCode::kInvalidInput, "non-numeric cell '" + cell + "' in " + path);
      }
    }
    Require(row.size() >= 2, "dataset row needs features and a label");
    if (!rows.empty()) {
      Require(row.size() == rows.front().size(), "ragged dataset row in " + path);
    }
    rows.push_back(std::move(row));
  }
  Require(!rows.empty(), "empty dataset " + path);
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size() - 1);
  Eigen::MatrixXd x(d, n);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(j, i) = rows[i][j];
    y[i] = rows[i][d];
  }
  return Dataset(std::move(x), std::move(y));
}

void SaveCsvDataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  Require(out.good(), "cannot write " + path);
  out.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const SampleView s = data[i];
    for (Eigen::Index j = 0; j < s.x.size(); ++j) out << s.x[j] << ',';
    out << s.y << '\n';
  }
}

double QuadraticOffset::Value(const Vector& w) const {
  if (coeff_lambda == 0.0) return 0.0;
  if (center.size() == 0) return coeff_lambda * w.squaredNorm();
  return coeff_lambda * (w - center).squaredNorm();
}

void QuadraticOffset::AddGradient(const Vector& w, Vector& out) const {
  if (coeff_lambda == 0.0) return;
  if (center.size() == 0) {
    out.noalias() += 2.0 * coeff_lambda * w;
  } else {
    out.noalias() += 2.0 * coeff_lambda * (w - center);
  }
}

Vector LossFamily::Subgrad(const Vector& w, const SampleView& sample) const {
  Vector g = Vector::Zero(w.size());
  add_subgrad(w, sample, 1.0, g);
  return g;
}

Domain Domain::MakeBall(Vector center, double radius, double expansion_r) {
  Require(radius > 0.0 && std::isfinite(radius), "ball radius must be positive");
  Require(expansion_r >= 0.0, "expansion radius must be nonnegative");
  Require(AllFinite(center), "ball center must be finite");
  Domain d;
  d.kind_ = DomainKind::kBall;
  d.center_ = std::move(center);
  d.radius_ = radius;
  d.expansion_r_ = expansion_r;
  return d;
}

Domain Domain::MakeBox(Vector lo, Vector hi, double expansion_r) {
  Require(lo.size() == hi.size() && lo.size() >= 1, "box bounds differ in size");
  Require(AllFinite(lo) && AllFinite(hi), "box bounds must be finite");
  Require((lo.array() <= hi.array()).all(), "box needs lo <= hi");
  Require(expansion_r >= 0.0, "expansion radius must be nonnegative");
  Domain d;
  d.kind_ = DomainKind::kBox;
  d.center_ = 0.5 * (lo + hi);
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  d.expansion_r_ = expansion_r;
  return d;
}

Domain Domain::WithinBall(Vector center, double radius) const {
  Require(center.size() == dim(), "restriction center has wrong dimension");
  Require(radius > 0.0, "restriction radius must be positive");
  Domain d = *this;
  d.restriction_ = Ball{std::move(center), radius};
  return d;
}

int Domain::dim() const { return static_cast<int>(center_.size()); }

double Domain::diameter() const {
  const double base = kind_ == DomainKind::kBall ? 2.0 * radius_ : (hi_ - lo_).norm();
  if (!restriction_) return base;
  return std::min(base, 2.0 * restriction_->radius);
}

Vector ProjectOntoBall(const Vector& p, const Vector& center, double radius) {
  const Vector diff = p - center;
  const double norm = diff.norm();
  if (norm <= radius) return p;
  return center + diff * (radius / norm);
}

Vector Domain::ProjectBase(const Vector& p) const {
  if (kind_ == DomainKind::kBall) return ProjectOntoBall(p, center_, radius_);
  return p.cwiseMax(lo_).cwiseMin(hi_);
}

bool Domain::BaseContains(const Vector& p, double tol) const {
  if (kind_ == DomainKind::kBall) return (p - center_).norm() <= radius_ + tol;
  return ((p.array() >= lo_.array() - tol) && (p.array() <= hi_.array() + tol)).all();
}

Vector Domain::Project(const Vector& p) const {
  Require(p.size() == dim(), "projection: point has wrong dimension");
  Require(AllFinite(p), "projection: non-finite coordinates");
  if (!restriction_) return ProjectBase(p);
  const Ball& ball = *restriction_;
  // Dykstra: ball first, then K.
  Vector x = p;
  Vector p_inc = Vector::Zero(p.size());
  Vector q_inc = Vector::Zero(p.size());
  for (int it = 0; it < kDykstraMaxIterations; ++it) {
    const Vector y = ProjectOntoBall(x + p_inc, ball.center, ball.radius);
    p_inc = x + p_inc - y;
    const Vector next = ProjectBase(y + q_inc);
    q_inc = y + q_inc - next;
    const double moved = (next - x).norm();
    x = next;
    if (moved <= kDykstraTolerance && (x - y).norm() <= kDykstraTolerance) break;
  }
  return x;
}

bool Domain::Contains(const Vector& p, double tol) const {
  if (p.size() != dim() || !AllFinite(p)) return false;
  if (!BaseContains(p, tol)) return false;
  if (restriction_ && (p - restriction_->center).norm() > restriction_->radius + tol) {
    return false;
  }
  return true;
}

double Domain::MaxDistanceInExpansion(const Vector& from) const {
  double base;
  if (kind_ == DomainKind::kBall) {
    base = (from - center_).norm() + radius_;
  } else {
    base = (from - lo_).cwiseAbs().cwiseMax((hi_ - from).cwiseAbs()).norm();
  }
  if (restriction_) {
    base = std::min(base, (from - restriction_->center).norm() + restriction_->radius);
  }
  return base + expansion_r_;
}

Vector Domain::InteriorPoint() const {
  if (!restriction_) return center_;
  // Walk from the restriction center toward the center of K; the midpoint of
  // the segment part lying in both sets is interior whenever the
  // intersection has nonempty interior.
  const Vector& c = restriction_->center;
  double lo_t = 0.0, hi_t = 1.0;
  auto inside_both = [&](double t) {
    const Vector p = c + t * (center_ - c);
    const bool in_base = kind_ == DomainKind::kBall
                             ? (p - center_).norm() < radius_
                             : ((p.array() > lo_.array()) && (p.array() < hi_.array())).all();
    return in_base && (p - c).norm() < restriction_->radius;
  };
  // Find any t with the point in both sets, then centre it.
  std::vector<double> good;
  for (int i = 0; i <= 64; ++i) {
    const double t = i / 64.0;
    if (inside_both(t)) good.push_back(t);
  }
  if (good.empty()) {
    // Restriction ball is tiny relative to the grid: use its projection.
    return Project(c);
  }
  lo_t = good.front();
  hi_t = good.back();
  return c + 0.5 * (lo_t + hi_t) * (center_ - c);
}

LossFamily HingeFamily(double feature_bound) {
  Require(feature_bound >= 0.0, "hinge: feature bound must be nonnegative");
  LossFamily f;
  f.name = "hinge";
  f.kind = LossKind::kHinge;
  f.lipschitz_G = feature_bound;
  f.value = [](const Vector& w, const SampleView& s) {
    Require(w.size() == s.x.size(), "hinge: dimension mismatch");
    return std::max(0.0, 1.0 - s.y * w.dot(s.x));
  };
  f.add_subgrad = [](const Vector& w, const SampleView& s, double scale, Vector& acc) {
    Require(w.size() == s.x.size(), "hinge: dimension mismatch");
    if (s.y * w.dot(s.x) < 1.0) acc.noalias() -= (scale * s.y) * s.x;
  };
  return f;
}

LossFamily QuadraticFamily(double scale, double feature_bound, const Domain& domain) {
  Require(scale >= 0.0, "quadratic: scale must be nonnegative");
  LossFamily f;
  f.name = "quadratic";
  f.kind = LossKind::kQuadratic;
  f.shape = scale;
  f.strong_mu = 2.0 * scale;
  f.lipschitz_G =
      2.0 * scale * (domain.MaxDistanceInExpansion(Vector::Zero(domain.dim())) + feature_bound);
  f.value = [scale](const Vector& w, const SampleView& s) {
    Require(w.size() == s.x.size(), "quadratic: dimension mismatch");
    return scale * (w - s.x).squaredNorm();
  };
  f.add_subgrad = [scale](const Vector& w, const SampleView& s, double k, Vector& acc) {
    Require(w.size() == s.x.size(), "quadratic: dimension mismatch");
    acc.noalias() += (2.0 * scale * k) * (w - s.x);
  };
  return f;
}

LossFamily DistanceFamily() {
  LossFamily f;
  f.name = "distance";
  f.kind = LossKind::kDistance;
  f.lipschitz_G = 1.0;
  f.value = [](const Vector& w, const SampleView& s) {
    Require(w.size() == s.x.size(), "distance: dimension mismatch");
    return (w - s.x).norm();
  };
  f.add_subgrad = [](const Vector& w, const SampleView& s, double k, Vector& acc) {
    Require(w.size() == s.x.size(), "distance: dimension mismatch");
    const double norm = (w - s.x).norm();
    if (norm > 0.0) acc.noalias() += (k / norm) * (w - s.x);
  };
  return f;
}

LossFamily LinearFamily(double feature_bound) {
  LossFamily f;
  f.name = "linear";
  f.kind = LossKind::kLinear;
  f.lipschitz_G = feature_bound;
  f.value = [](const Vector& w, const SampleView& s) {
    Require(w.size() == s.x.size(), "linear: dimension mismatch");
    return -s.y * w.dot(s.x);
  };
  f.add_subgrad = [](const Vector& w, const SampleView& s, double k, Vector& acc) {
    Require(w.size() == s.x.size(), "linear: dimension mismatch");
    acc.noalias() -= (k * s.y) * s.x;
  };
  return f;
}

LossFamily Regularize(const LossFamily& family, const QuadraticOffset& offset,
                      const Domain& domain) {
  Require(offset.coeff_lambda >= 0.0 && std::isfinite(offset.coeff_lambda),
          "regularize: coeff_lambda must be nonnegative");
  if (offset.coeff_lambda == 0.0) return family;
  QuadraticOffset off = offset;
  if (off.center.size() == 0) off.center = Vector::Zero(domain.dim());
  Require(off.center.size() == domain.dim(), "regularize: center has wrong dimension");
  LossFamily out = family;
  out.name = family.name + "+offset";
  out.strong_mu = family.strong_mu + off.StrongConvexity();
  out.lipschitz_G = family.lipschitz_G +
                    2.0 * off.coeff_lambda * domain.MaxDistanceInExpansion(off.center);
  out.offsets.push_back(off);
  out.value = [base = family.value, off](const Vector& w, const SampleView& s) {
    return base(w, s) + off.Value(w);
  };
  out.add_subgrad = [base = family.add_subgrad, off](const Vector& w, const SampleView& s,
                                                     double k, Vector& acc) {
    base(w, s, k, acc);
    acc.noalias() += (2.0 * k * off.coeff_lambda) * (w - off.center);
  };
  return out;
}

double EmpiricalRisk(const LossFamily& family, const Dataset& data, const Vector& w) {
  Require(w.size() == data.dim(), "empirical risk: dimension mismatch");
  if (family.kind == LossKind::kHinge) {
    const Vector margins = data.labels().cwiseProduct(data.features().transpose() * w);
    double total = (1.0 - margins.array()).max(0.0).sum() / static_cast<double>(data.size());
    for (const QuadraticOffset& off : family.offsets) total += off.Value(w);
    return total;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) total += family.value(w, data[i]);
  return total / static_cast<double>(data.size());
}

Vector EmpiricalSubgrad(const LossFamily& family, const Dataset& data, const Vector& w) {
  Vector g = Vector::Zero(w.size());
  const double scale = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) family.add_subgrad(w, data[i], scale, g);
  return g;
}

}  // namespace dpsco
