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

#include "dpsco/exact_oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dpsco/error.h"

namespace dpsco {
namespace {

std::vector<QuadraticOffset> AllOffsets(const LossFamily& family, const QuadraticOffset& extra,
                                        int d) {
  std::vector<QuadraticOffset> out;
  auto add = [&](const QuadraticOffset& off) {
    if (off.coeff_lambda <= 0.0) return;
    QuadraticOffset o = off;
    if (o.center.size() == 0) o.center = Vector::Zero(d);
    out.push_back(std::move(o));
  };
  for (const auto& off : family.offsets) add(off);
  add(extra);
  return out;
}

double Objective(const LossFamily& family, const Dataset& data, const QuadraticOffset& extra,
                 const Vector& w) {
  return EmpiricalRisk(family, data, w) + extra.Value(w);
}

// Log-barrier terms for w in K (and the optional restriction ball).
struct DomainBarrier {
  const Domain& domain;

  bool Feasible(const Vector& w) const {
    if (domain.kind() == DomainKind::kBall) {
      if ((w - domain.center()).squaredNorm() >= domain.radius() * domain.radius()) return false;
    } else {
      if (((w - domain.lo()).array() <= 0.0).any() || ((domain.hi() - w).array() <= 0.0).any()) {
        return false;
      }
    }
    if (const auto& rb = domain.restriction()) {
      if ((w - rb->center).squaredNorm() >= rb->radius * rb->radius) return false;
    }
    return true;
  }

  int Count() const {
    int m = domain.kind() == DomainKind::kBall ? 1 : 2 * domain.dim();
    if (domain.restriction()) ++m;
    return m;
  }

  double Value(const Vector& w) const {
    double v = 0.0;
    if (domain.kind() == DomainKind::kBall) {
      v -= std::log(domain.radius() * domain.radius() - (w - domain.center()).squaredNorm());
    } else {
      v -= (w - domain.lo()).array().log().sum() + (domain.hi() - w).array().log().sum();
    }
    if (const auto& rb = domain.restriction()) {
      v -= std::log(rb->radius * rb->radius - (w - rb->center).squaredNorm());
    }
    return v;
  }

  void AddBall(const Vector& w, const Vector& c, double R, Vector& g, Eigen::MatrixXd& H) const {
    const Vector diff = w - c;
    const double u = R * R - diff.squaredNorm();
    g += (2.0 / u) * diff;
    H.diagonal().array() += 2.0 / u;
    H.noalias() += (4.0 / (u * u)) * diff * diff.transpose();
  }

  void AddDerivatives(const Vector& w, Vector& g, Eigen::MatrixXd& H) const {
    if (domain.kind() == DomainKind::kBall) {
      AddBall(w, domain.center(), domain.radius(), g, H);
    } else {
      const Eigen::ArrayXd a = (w - domain.lo()).array();
      const Eigen::ArrayXd b = (domain.hi() - w).array();
      g.array() += -1.0 / a + 1.0 / b;
      H.diagonal().array() += 1.0 / (a * a) + 1.0 / (b * b);
    }
    if (const auto& rb = domain.restriction()) AddBall(w, rb->center, rb->radius, g, H);
  }
};

}  // namespace

ExactSolution QuadraticClosedForm(const LossFamily& family, const Dataset& data,
                                  const Domain& domain, const QuadraticOffset& extra) {
  Require(family.kind == LossKind::kQuadratic, "closed form needs a quadratic family");
  const int d = data.dim();
  const Vector mean = data.features().rowwise().mean();
  double weight = family.shape;
  Vector numer = family.shape * mean;
  for (const auto& off : AllOffsets(family, extra, d)) {
    weight += off.coeff_lambda;
    numer += off.coeff_lambda * off.center;
  }
  Require(weight > 0.0, "closed form needs positive curvature");
  ExactSolution sol;
  sol.point = domain.Project(numer / weight);
  sol.value = Objective(family, data, extra, sol.point);
  sol.certified = true;
  sol.method = "closed-form";
  return sol;
}

ExactSolution HingeBarrierSolve(const LossFamily& family, const Dataset& data,
                                const Domain& domain, const QuadraticOffset& extra,
                                const ExactOracleOptions& options) {
  Require(family.kind == LossKind::kHinge, "barrier solver needs a hinge family");
  const int d = data.dim();
  const double n = static_cast<double>(data.size());
  const Eigen::MatrixXd A = data.features() * data.labels().asDiagonal();  // columns y_i x_i
  const auto offsets = AllOffsets(family, extra, d);
  double q_curv = 0.0;
  Vector q_lin = Vector::Zero(d);
  for (const auto& off : offsets) {
    q_curv += 2.0 * off.coeff_lambda;
    q_lin += 2.0 * off.coeff_lambda * off.center;
  }
  auto q_value = [&](const Vector& w) {
    double v = 0.0;
    for (const auto& off : offsets) v += off.Value(w);
    return v;
  };
  const DomainBarrier barrier{domain};
  // Epigraph form: min sum_i xi_i + n q(w), xi_i >= 0, xi_i >= r_i = 1 - a_i'w.
  // For fixed w each xi_i is eliminated in closed form, leaving a smooth
  // d-dimensional centering problem. Gap bound in mean units: m / (t n).
  const double m = 2.0 * n + barrier.Count();

  // Per-sample centred slack: positive root of t xi^2 - (t r + 2) xi + r = 0.
  auto slack = [](double t, double r) {
    const double b = t * r + 2.0;
    const double root = std::sqrt(t * t * r * r + 4.0);
    return b >= 0.0 ? (b + root) / (2.0 * t) : 2.0 * r / (b - root);
  };
  auto psi = [&](double t, const Vector& w) {
    const Eigen::ArrayXd r = 1.0 - (A.transpose() * w).array();
    double v = t * n * q_value(w) + barrier.Value(w);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double xi = slack(t, r[i]);
      v += t * xi - std::log(xi) - std::log(xi - r[i]);
    }
    return v;
  };

  Vector w = domain.InteriorPoint();
  double t = 1.0;
  bool centred = false;
  double residual = 0.0;
  while (true) {
    centred = false;
    for (int it = 0; it < 100; ++it) {
      const Eigen::ArrayXd r = 1.0 - (A.transpose() * w).array();
      Eigen::ArrayXd dphi(r.size()), d2phi(r.size());
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double xi = slack(t, r[i]);
        const double s = xi - r[i];
        dphi[i] = 1.0 / s;
        d2phi[i] = 1.0 / (xi * xi + s * s);
      }
      Vector g = t * n * (q_curv * w - q_lin) - A * dphi.matrix();
      Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d) * (t * n * q_curv);
      H.noalias() += A * d2phi.matrix().asDiagonal() * A.transpose();
      barrier.AddDerivatives(w, g, H);
      const Vector dw = H.ldlt().solve(-g);
      const double lambda2 = -g.dot(dw);
      if (!(lambda2 >= 0.0)) break;
      // Centering error in mean units is about lambda2 / (2 t n).
      if (lambda2 / 2.0 <= std::max(1e-8, 1e-11 * t * n)) {
        centred = true;
        residual = lambda2 / (2.0 * t * n);
        break;
      }
      double step = 1.0;
      if (lambda2 > 0.04) {
        // Damped phase: backtrack on the centering objective.
        const double f0 = psi(t, w);
        while (step > 1e-12 &&
               (!barrier.Feasible(w + step * dw) || psi(t, w + step * dw) > f0 - 0.01 * step * lambda2)) {
          step *= 0.5;
        }
        if (step <= 1e-12) break;
      } else if (!barrier.Feasible(w + dw)) {
        break;
      }
      w += step * dw;
    }
    if (!centred || m / (t * n) <= options.gap_tolerance) break;
    t *= 10.0;
  }

  ExactSolution sol;
  sol.point = w;
  sol.value = Objective(family, data, extra, w);
  sol.gap = m / (t * n) + residual;
  sol.certified = centred && sol.gap <= 1e-8;
  sol.method = "log-barrier";
  return sol;
}

ExactSolution SubgradientSolve(const LossFamily& family, const Dataset& data,
                               const Domain& domain, const QuadraticOffset& extra,
                               std::uint64_t iterations) {
  Require(iterations >= 1, "subgradient solve needs iterations >= 1");
  const double D = std::max(domain.diameter(), 1e-12);
  const double G = std::max(family.lipschitz_G + 2.0 * extra.coeff_lambda * D, 1e-12);
  Vector w = domain.InteriorPoint();
  Vector best = w;
  double best_value = Objective(family, data, extra, w);
  for (std::uint64_t k = 1; k <= iterations; ++k) {
    Vector g = EmpiricalSubgrad(family, data, w);
    if (extra.coeff_lambda > 0.0) extra.AddGradient(w, g);
    w = domain.Project(w - (D / (G * std::sqrt(static_cast<double>(k)))) * g);
    const double v = Objective(family, data, extra, w);
    if (v < best_value) {
      best_value = v;
      best = w;
    }
  }
  ExactSolution sol;
  sol.point = best;
  sol.value = best_value;
  sol.gap = std::numeric_limits<double>::infinity();
  sol.certified = false;
  sol.method = "subgradient";
  return sol;
}

ExactSolution ExactErmOracle(const LossFamily& family, const Dataset& data, const Domain& domain,
                             const QuadraticOffset& extra, const ExactOracleOptions& options) {
  Require(extra.coeff_lambda >= 0.0, "exact oracle: extra offset must be nonnegative");
  switch (family.kind) {
    case LossKind::kQuadratic:
      return QuadraticClosedForm(family, data, domain, extra);
    case LossKind::kHinge:
      return HingeBarrierSolve(family, data, domain, extra, options);
    default:
      return SubgradientSolve(family, data, domain, extra, options.subgradient_iterations);
  }
}

}  // namespace dpsco
