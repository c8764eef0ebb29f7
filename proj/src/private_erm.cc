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

#include "dpsco/private_erm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpsco/acsa.h"
#include "dpsco/error.h"
#include "dpsco/smoothing.h"

namespace dpsco {
namespace {

double LogInv(double delta) { return std::log(1.0 / delta); }

}  // namespace

double PrivateAcsaConfig::Smoothness(double G, int d) const {
  if (L_override) return *L_override;
  Require(r > 0.0, "private AC-SA: r must be positive unless L is overridden");
  return G * std::sqrt(static_cast<double>(d)) / r;
}

SolveResult PrivateAcsa(const LossFamily& family, const Dataset& data, const Domain& domain,
                        const Vector& w0, const PrivateAcsaConfig& cfg,
                        const AccountantConstants& consts, std::uint64_t seed,
                        std::uint64_t stream, const QuadraticOffset& h) {
  const std::uint64_t N = data.size();
  Require(cfg.T >= 1 && cfg.B >= 1 && cfg.B <= N, "private AC-SA: need T >= 1, 1 <= B <= N");
  Require(data.dim() == domain.dim() && w0.size() == domain.dim(),
          "private AC-SA: dimension mismatch");
  const double G = family.lipschitz_G;
  const double L = cfg.Smoothness(G, domain.dim());
  Require(std::isfinite(L) && L > 0.0, "private AC-SA: smoothness must be finite and positive");

  // Everything privacy-related is settled before the data is touched.
  SolveResult result;
  if (cfg.budget) {
    const auto violations = CalibrationViolations(cfg.B, cfg.T, N, *cfg.budget, consts);
    if (!violations.empty()) {
      std::string msg = "private AC-SA:";
      for (const auto& v : violations) msg += " " + v + ";";
      Fail(ErrorCode::kPrecondition, msg);
    }
    const PipelineReport report = RunPipeline(G, cfg.B, cfg.T, N, cfg.sigma, cfg.budget->delta, consts);
    if (report.spent.epsilon > cfg.budget->epsilon) {
      Fail(ErrorCode::kCalibration, "private AC-SA: sigma too small for the requested budget");
    }
    result.spent = report.spent;
  }

  const SmoothedOracleConfig ocfg{cfg.r, static_cast<std::size_t>(cfg.B), cfg.sigma, data, family,
                                  domain};
  ocfg.Validate();
  SmoothedOracle oracle(ocfg, OracleStreams::For(seed, stream));
  StochasticOracle so{[&oracle](const Vector& w) { return oracle.Query(w); }, oracle.batch_size()};

  AcsaOptions opts;
  opts.T = cfg.T;
  opts.mu = cfg.mu;
  opts.L = L;
  opts.h = h;
  const AcsaResult run = AcsaRun(so, w0, opts, domain);
  result.point = run.point;
  result.gradient_count = run.gradient_count;

  PhaseRecord rec;
  rec.stage = "private-acsa";
  rec.eps = cfg.budget ? cfg.budget->epsilon : 0.0;
  rec.delta = cfg.budget ? cfg.budget->delta : 0.0;
  rec.N = N;
  rec.T = cfg.T;
  rec.B = cfg.B;
  rec.sigma = cfg.sigma;
  rec.r = cfg.r;
  rec.mu = cfg.mu;
  rec.gradient_count = run.gradient_count;
  rec.reg_lambda = h.coeff_lambda;
  rec.spent_eps = result.spent.epsilon;
  rec.risk = EmpiricalRisk(family, data, run.point) + h.Value(run.point);
  rec.start = w0;
  rec.point = run.point;
  result.phases.push_back(std::move(rec));
  return result;
}

std::optional<PrivateAcsaConfig> ErmStronglySchedule(double G, double D, double mu,
                                                     std::uint64_t N, int d,
                                                     const ApproxDpBudget& budget,
                                                     const AccountantConstants& consts) {
  budget.Validate();
  consts.Validate();
  Require(G > 0.0 && D > 0.0 && N >= 1 && d >= 1, "ERM schedule: need G, D, N, d positive");
  const double n = static_cast<double>(N);
  const double dd = static_cast<double>(d);
  const double ln = LogInv(budget.delta);
  const double eps = budget.epsilon;
  if (dd * ln > eps * eps * n * n) return std::nullopt;

  const double d4 = std::pow(dd, 0.25);
  PrivateAcsaConfig cfg;
  cfg.T = static_cast<std::uint64_t>(std::max(1.0, std::ceil(100.0 * eps * n / (consts.c1 * d4 * std::sqrt(ln)))));
  const double t = static_cast<double>(cfg.T);
  cfg.B = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(eps * n * n / (consts.c1 * t)) + eps * eps * n * n / (dd * ln * t)));
  cfg.r = D / (t * d4);
  cfg.mu = mu;
  cfg.budget = budget;
  cfg.sigma = CalibrateSigma(G, cfg.B, cfg.T, N, budget, consts).sigma;
  return cfg;
}

int DoublingPhases(std::uint64_t N) {
  Require(N >= 2, "doubling reduction needs N >= 2");
  const double x = 3.0 * std::log2(static_cast<double>(N));
  return std::max(1, static_cast<int>(std::ceil(std::log2(x))));
}

std::vector<ApproxDpBudget> DoublingBudgets(const ApproxDpBudget& budget, int k) {
  Require(k >= 1, "doubling reduction needs k >= 1");
  std::vector<ApproxDpBudget> out;
  for (int i = 1; i <= k; ++i) {
    const double scale = std::ldexp(1.0, -(k + 1 - i));
    out.push_back({budget.epsilon * scale, budget.delta * scale});
  }
  return out;
}

SolveResult DoublingReduction(const PhaseSolver& solver, const Vector& w0,
                              const ApproxDpBudget& budget, std::uint64_t N,
                              std::optional<int> k_override) {
  budget.Validate();
  const int k = k_override ? *k_override : DoublingPhases(N);
  const auto budgets = DoublingBudgets(budget, k);
  SolveResult total;
  total.point = w0;
  for (int i = 1; i <= k; ++i) {
    SolveResult part;
    try {
      part = solver(total.point, budgets[i - 1], i);
    } catch (const Error& e) {
      Rethrow(e, "doubling phase " + std::to_string(i));
    }
    total.point = std::move(part.point);
    total.gradient_count += part.gradient_count;
    total.spent.epsilon += part.spent.epsilon;
    total.spent.delta += part.spent.delta;
    for (auto& rec : part.phases) {
      if (rec.stage == "private-acsa" || rec.stage == "trivial") {
        rec.phase = i;
      } else {
        rec.outer = i;
      }
      total.phases.push_back(std::move(rec));
    }
  }
  return total;
}

SolveResult ErmStrongly(const LossFamily& family, const Dataset& data, const Domain& domain,
                        const Vector& w0, const ApproxDpBudget& budget,
                        const AccountantConstants& consts, std::uint64_t seed,
                        const QuadraticOffset& h, std::optional<int> k_override) {
  const double mu = family.strong_mu + h.StrongConvexity();
  Require(mu > 0.0, "strongly convex ERM needs mu > 0");
  const double G = family.lipschitz_G;
  const double D = domain.diameter();
  const std::uint64_t N = data.size();
  const int d = data.dim();
  PhaseSolver solver = [&](const Vector& start, const ApproxDpBudget& sub, int phase) {
    const auto cfg = ErmStronglySchedule(G, D, mu, N, d, sub, consts);
    if (!cfg) {
      SolveResult trivial;
      trivial.point = start;
      PhaseRecord rec;
      rec.stage = "trivial";
      rec.eps = sub.epsilon;
      rec.delta = sub.delta;
      rec.N = N;
      rec.skipped = true;
      rec.note = "d ln(1/delta) > eps^2 N^2: start point returned";
      rec.start = start;
      rec.point = start;
      trivial.phases.push_back(std::move(rec));
      return trivial;
    }
    return PrivateAcsa(family, data, domain, start, *cfg, consts, seed,
                       static_cast<std::uint64_t>(phase), h);
  };
  return DoublingReduction(solver, w0, budget, N, k_override);
}

double RegularizationWeight(double G, double D, int d, std::uint64_t N,
                            const ApproxDpBudget& budget, double u_scale) {
  return u_scale * G * std::sqrt(static_cast<double>(d) * LogInv(budget.delta)) /
         (D * budget.epsilon * static_cast<double>(N));
}

SolveResult ErmGeneral(const LossFamily& family, const Dataset& data, const Domain& domain,
                       const Vector& w0, const ApproxDpBudget& budget,
                       const AccountantConstants& consts, std::uint64_t seed, double u_scale) {
  budget.Validate();
  const double G = family.lipschitz_G;
  const double D = domain.diameter();
  const double u = RegularizationWeight(G, D, data.dim(), data.size(), budget, u_scale);
  if (u * D > G) {
    SolveResult out;
    out.point = w0;
    PhaseRecord rec;
    rec.stage = "trivial";
    rec.eps = budget.epsilon;
    rec.delta = budget.delta;
    rec.N = data.size();
    rec.skipped = true;
    rec.reg_lambda = u;
    rec.note = "u D > G: start point returned";
    rec.start = w0;
    rec.point = w0;
    out.phases.push_back(std::move(rec));
    return out;
  }
  return ErmStrongly(family, data, domain, w0, budget, consts, seed, QuadraticOffset{u, w0});
}

double RecurrenceWitness(double n) {
  Require(n >= 2.0, "recurrence needs n >= 2");
  const int k = std::max(1, static_cast<int>(std::ceil(std::log2(std::log2(n)))));
  double x = n;
  for (int i = 1; i < k; ++i) x = std::sqrt(x) + 1.0;
  return x;
}

}  // namespace dpsco
