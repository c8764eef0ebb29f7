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

#include "dpsco/harness.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <thread>

#include "dpsco/error.h"
#include "dpsco/exact_oracle.h"
#include "dpsco/localization.h"
#include "dpsco/sampling.h"

namespace dpsco {
namespace {

constexpr std::uint64_t kBaselineStream = 1u << 20;

double PopulationMin(const Task& task, const Dataset& eval) {
  return ExactErmOracle(task.family, eval, task.domain).value;
}

TrialResult RunTrial(const ExperimentConfig& cfg, std::uint64_t seed, PopulationCache* cache) {
  TrialResult tr;
  tr.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    TaskOptions topts = cfg.task;
    const Task task = MakeTask(topts, seed);
    const ExactSolution ref = ExactErmOracle(task.family, task.data, task.domain);
    tr.reference_value = ref.value;
    tr.reference_certified = ref.certified;
    SolveResult res = RunAlgo(cfg.algo, task.family, task.data, task.domain, task.w0, cfg.budget,
                              cfg.consts, seed, cfg.dpsgd);
    tr.point = res.point;
    tr.digest = DigestPoint(res.point);
    tr.gradient_count = res.gradient_count;
    tr.spent = res.spent;
    tr.phases = std::move(res.phases);
    tr.excess_empirical_risk = EmpiricalRisk(task.family, task.data, res.point) - ref.value;
    if (cfg.population_mc > 0) {
      const Dataset* eval = nullptr;
      double min_value = 0.0;
      std::optional<PopulationCache::Entry> local;
      if (cache) {
        std::lock_guard<std::mutex> lock(cache->mu);
        auto it = cache->entries.find(seed);
        if (it == cache->entries.end()) {
          RandomStream rng = RandomStream::For(seed, StreamRole::kEvaluation);
          Dataset ev = task.Sample(cfg.population_mc, rng);
          const double mv = PopulationMin(task, ev);
          it = cache->entries.emplace(seed, PopulationCache::Entry{std::move(ev), mv}).first;
        }
        eval = &it->second.eval;
        min_value = it->second.min_value;
      } else {
        RandomStream rng = RandomStream::For(seed, StreamRole::kEvaluation);
        Dataset ev = task.Sample(cfg.population_mc, rng);
        const double mv = PopulationMin(task, ev);
        local.emplace(PopulationCache::Entry{std::move(ev), mv});
        eval = &local->eval;
        min_value = local->min_value;
      }
      tr.excess_population_loss = EmpiricalRisk(task.family, *eval, res.point) - min_value;
    }
  } catch (const std::exception& e) {
    tr.ok = false;
    tr.error = e.what();
  }
  tr.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

}  // namespace

std::string_view AlgoName(Algo algo) {
  switch (algo) {
    case Algo::kPrivateAcsa:
      return "private-acsa";
    case Algo::kErmGeneral:
      return "erm-general";
    case Algo::kLocalize:
      return "localize";
    case Algo::kScoStrongly:
      return "sco-strongly";
    case Algo::kDpsgdBaseline:
      return "dpsgd-baseline";
  }
  return "unknown";
}

std::optional<Algo> ParseAlgo(std::string_view name) {
  for (Algo a : {Algo::kPrivateAcsa, Algo::kErmGeneral, Algo::kLocalize, Algo::kScoStrongly,
                 Algo::kDpsgdBaseline}) {
    if (AlgoName(a) == name) return a;
  }
  return std::nullopt;
}

double DpsgdSigma(double G, const ApproxDpBudget& budget) {
  budget.Validate();
  return G * std::sqrt(std::log(1.0 / budget.delta)) / budget.epsilon;
}

SolveResult DpsgdBaseline(const LossFamily& family, const Dataset& data, const Domain& domain,
                          const Vector& w0, const ApproxDpBudget& budget, std::uint64_t seed,
                          const DpsgdOptions& options) {
  budget.Validate();
  Require(w0.size() == domain.dim() && domain.Contains(w0), "baseline: start must lie in K");
  const std::uint64_t N = data.size();
  const int d = data.dim();
  const double G = family.lipschitz_G;
  const double sigma = DpsgdSigma(G, budget);
  std::uint64_t T = options.steps ? *options.steps : N * N;
  Require(T >= 1, "baseline: T must be positive");
  bool capped = false;
  if (options.step_cap > 0 && T > options.step_cap) {
    T = options.step_cap;
    capped = true;
  }
  const double g_eff = std::sqrt(G * G + d * sigma * sigma);
  const double step = domain.diameter() / (g_eff * std::sqrt(static_cast<double>(T)));

  RandomStream noise = RandomStream::For(seed, StreamRole::kNoise, kBaselineStream);
  RandomStream pick = RandomStream::For(seed, StreamRole::kSubsample, kBaselineStream);
  Vector w = w0;
  Vector sum = Vector::Zero(d);
  Vector g(d);
  for (std::uint64_t t = 0; t < T; ++t) {
    g.setZero();
    family.add_subgrad(w, data[pick.Index(N)], 1.0, g);
    for (int j = 0; j < d; ++j) g[j] += sigma * noise.Normal();
    w = domain.Project(w - step * g);
    sum += w;
  }

  SolveResult out;
  out.point = sum / static_cast<double>(T);
  out.gradient_count = T;
  out.spent = budget;
  PhaseRecord rec;
  rec.stage = "dpsgd-baseline";
  rec.phase = 1;
  rec.eps = budget.epsilon;
  rec.delta = budget.delta;
  rec.N = N;
  rec.T = T;
  rec.B = 1;
  rec.sigma = sigma;
  rec.gradient_count = T;
  rec.spent_eps = budget.epsilon;
  if (capped) rec.note = "T capped at " + std::to_string(T) + " (N^2 = " + std::to_string(N * N) + ")";
  rec.risk = EmpiricalRisk(family, data, out.point);
  rec.start = w0;
  rec.point = out.point;
  out.phases.push_back(std::move(rec));
  return out;
}

SolveResult RunAlgo(Algo algo, const LossFamily& family, const Dataset& data, const Domain& domain,
                    const Vector& w0, const ApproxDpBudget& budget,
                    const AccountantConstants& consts, std::uint64_t seed,
                    const DpsgdOptions& dpsgd) {
  switch (algo) {
    case Algo::kPrivateAcsa: {
      QuadraticOffset h;
      if (family.strong_mu <= 0.0) {
        h = {RegularizationWeight(family.lipschitz_G, domain.diameter(), data.dim(), data.size(),
                                  budget),
             w0};
      }
      const double mu = family.strong_mu + h.StrongConvexity();
      const auto cfg = ErmStronglySchedule(family.lipschitz_G, domain.diameter(), mu, data.size(),
                                           data.dim(), budget, consts);
      if (!cfg) {
        SolveResult out;
        out.point = w0;
        PhaseRecord rec;
        rec.stage = "trivial";
        rec.eps = budget.epsilon;
        rec.delta = budget.delta;
        rec.N = data.size();
        rec.skipped = true;
        rec.note = "d ln(1/delta) > eps^2 N^2: start point returned";
        rec.start = w0;
        rec.point = w0;
        out.phases.push_back(std::move(rec));
        return out;
      }
      return PrivateAcsa(family, data, domain, w0, *cfg, consts, seed, 0, h);
    }
    case Algo::kErmGeneral:
      return ErmGeneral(family, data, domain, w0, budget, consts, seed);
    case Algo::kLocalize:
      return Localize(family, data, domain, w0, budget, consts, seed);
    case Algo::kScoStrongly:
      return ScoStrongly(family, data, domain, w0, budget, consts, seed);
    case Algo::kDpsgdBaseline:
      return DpsgdBaseline(family, data, domain, w0, budget, seed, dpsgd);
  }
  Fail(ErrorCode::kConfiguration, "unknown algorithm");
}

Summary Summarize(const std::vector<double>& values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

ExperimentReport RunExperiment(const ExperimentConfig& cfg, PopulationCache* cache) {
  cfg.budget.Validate();
  cfg.consts.Validate();
  Require(!cfg.seeds.empty(), "experiment: at least one trial is required");
  ExperimentReport report;
  report.config = cfg;
  report.trials.resize(cfg.seeds.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, cfg.seeds.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      report.trials[i] = RunTrial(cfg, cfg.seeds[i], cache);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
          report.trials[i] = RunTrial(cfg, cfg.seeds[i], cache);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<double> emp, pop, counts;
  for (const TrialResult& tr : report.trials) {
    if (!tr.ok) {
      ++report.failures;
      continue;
    }
    emp.push_back(tr.excess_empirical_risk);
    if (tr.excess_population_loss) pop.push_back(*tr.excess_population_loss);
    counts.push_back(static_cast<double>(tr.gradient_count));
  }
  report.excess_empirical = Summarize(emp);
  report.excess_population = Summarize(pop);
  report.gradient_count = Summarize(counts);
  return report;
}

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  Require(x.size() == y.size() && x.size() >= 2, "slope fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Require(x[i] > 0.0 && y[i] > 0.0, "slope fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  Require(denom > 0.0, "slope fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

SweepReport RunSweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values) {
  Require(values.size() >= 2, "sweep needs two or more values");
  SweepReport sweep;
  sweep.axis = axis;
  sweep.values = values;
  PopulationCache cache;
  std::vector<double> risk, pop, counts;
  for (double v : values) {
    ExperimentConfig cfg = base;
    switch (axis) {
      case SweepAxis::kN:
        cfg.task.N = static_cast<std::uint64_t>(v);
        break;
      case SweepAxis::kDim:
        cfg.task.d = static_cast<int>(v);
        break;
      case SweepAxis::kEps:
        cfg.budget.epsilon = v;
        break;
    }
    ExperimentReport rep = RunExperiment(cfg, axis == SweepAxis::kN ? &cache : nullptr);
    risk.push_back(rep.excess_empirical.mean);
    if (rep.excess_population.n > 0) pop.push_back(rep.excess_population.mean);
    counts.push_back(rep.gradient_count.mean);
    sweep.points.push_back(std::move(rep));
  }
  auto slope = [&](const std::vector<double>& ys) {
    if (ys.size() != values.size()) return std::nan("");
    for (double y : ys) {
      if (!(y > 0.0)) return std::nan("");
    }
    return LogLogSlope(values, ys);
  };
  sweep.risk_slope = slope(risk);
  sweep.population_slope = slope(pop);
  sweep.count_slope = slope(counts);
  return sweep;
}

std::vector<std::string> CheckReport(const ExperimentReport& report) {
  std::vector<std::string> problems;
  const ApproxDpBudget& b = report.config.budget;
  for (const TrialResult& tr : report.trials) {
    const std::string tag = "seed " + std::to_string(tr.seed) + ": ";
    if (!tr.ok) {
      problems.push_back(tag + "trial failed: " + tr.error);
      continue;
    }
    if (tr.spent.epsilon > b.epsilon || tr.spent.delta > b.delta) {
      problems.push_back(tag + "spent budget exceeds the request");
    }
    std::uint64_t sum = 0;
    for (const PhaseRecord& p : tr.phases) {
      sum += p.gradient_count;
      if (p.gradient_count != p.B * p.T && !p.skipped) {
        problems.push_back(tag + "phase count differs from B*T");
      }
      if (p.stage == "localize" && !p.skipped &&
          (p.point - p.start).norm() > p.ball_radius * (1.0 + 1e-9) + 1e-9) {
        problems.push_back(tag + "localization output outside its ball");
      }
    }
    if (sum != tr.gradient_count) problems.push_back(tag + "gradient count does not reconcile");
  }
  return problems;
}

std::string DigestPoint(const Vector& point) {
  std::uint64_t h = 1469598103934665603ull;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    unsigned char bytes[sizeof(double)];
    const double v = point[i];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dpsco
