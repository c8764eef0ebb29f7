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

// Command-line front end: run, sweep, account, report.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpsco/accountant.h"
#include "dpsco/error.h"
#include "dpsco/harness.h"
#include "dpsco/report.h"

namespace {

struct CommonArgs {
  std::string task = "hinge";
  std::string algo = "erm-general";
  std::uint64_t n = 1024;
  int dim = 16;
  double eps = 0.5;
  double delta = 1e-5;
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  std::string out = "results";
  double c1 = 1.0;
  double c2 = 8.0;
  double sensitivity_factor = 1.0;
  double label_noise = 0.1;
  double radius = 1.0;
  double reg_lambda = 0.05;
  std::uint64_t population_mc = 0;
  std::uint64_t dpsgd_cap = 0;
  unsigned threads = 1;
  bool timing = false;
  bool check = false;
};

void AddCommon(CLI::App* app, CommonArgs& a) {
  app->add_option("--task", a.task, "hinge | strongly-convex-hinge | quadratic");
  app->add_option("--algo", a.algo,
                  "private-acsa | erm-general | localize | sco-strongly | dpsgd-baseline");
  app->add_option("--n", a.n, "number of samples");
  app->add_option("--dim", a.dim, "dimension");
  app->add_option("--eps", a.eps, "privacy epsilon");
  app->add_option("--delta", a.delta, "privacy delta");
  app->add_option("--trials", a.trials, "number of trials (seeds seed..seed+trials-1)");
  app->add_option("--seed", a.seed, "first seed");
  app->add_option("--out", a.out, "output directory");
  app->add_option("--c1", a.c1, "accountant constant c1");
  app->add_option("--c2", a.c2, "accountant constant c2");
  app->add_option("--sensitivity-factor", a.sensitivity_factor,
                  "gradient-sum sensitivity as a multiple of G");
  app->add_option("--label-noise", a.label_noise, "hinge label flip probability");
  app->add_option("--radius", a.radius, "radius of the feasible ball");
  app->add_option("--reg-lambda", a.reg_lambda, "strongly convex hinge regularizer");
  app->add_option("--population-mc", a.population_mc,
                  "Monte-Carlo population set size (0 skips population loss)");
  app->add_option("--dpsgd-cap", a.dpsgd_cap, "DP-SGD step cap (0 disables)");
  app->add_option("--threads", a.threads, "trial worker threads");
  app->add_flag("--timing", a.timing, "record wall time in reports");
  app->add_flag("--check", a.check, "exit nonzero if any invariant check fails");
}

dpsco::ExperimentConfig ToConfig(const CommonArgs& a) {
  dpsco::ExperimentConfig cfg;
  const auto task = dpsco::ParseTask(a.task);
  if (!task) throw CLI::ValidationError("--task", "unknown task " + a.task);
  const auto algo = dpsco::ParseAlgo(a.algo);
  if (!algo) throw CLI::ValidationError("--algo", "unknown algorithm " + a.algo);
  if (a.trials < 1) throw CLI::ValidationError("--trials", "must be >= 1");
  cfg.task.kind = *task;
  cfg.task.N = a.n;
  cfg.task.d = a.dim;
  cfg.task.label_noise = a.label_noise;
  cfg.task.domain_radius = a.radius;
  cfg.task.reg_lambda = a.reg_lambda;
  cfg.algo = *algo;
  cfg.budget = {a.eps, a.delta};
  cfg.seeds.clear();
  for (std::uint64_t i = 0; i < a.trials; ++i) cfg.seeds.push_back(a.seed + i);
  cfg.consts = {a.c1, a.c2, a.sensitivity_factor};
  cfg.dpsgd.step_cap = a.dpsgd_cap;
  cfg.population_mc = a.population_mc;
  cfg.threads = a.threads;
  cfg.record_timing = a.timing;
  return cfg;
}

void PrintSummary(const dpsco::ExperimentReport& r) {
  std::cout << "N=" << r.config.task.N << " d=" << r.config.task.d
            << " eps=" << r.config.budget.epsilon << " trials=" << r.trials.size()
            << " failures=" << r.failures << "\n  excess empirical risk " << r.excess_empirical.mean
            << " +- " << r.excess_empirical.std;
  if (r.excess_population.n > 0) {
    std::cout << "\n  excess population loss " << r.excess_population.mean << " +- "
              << r.excess_population.std;
  }
  std::cout << "\n  gradient count " << r.gradient_count.mean << "\n";
}

int CheckAll(const std::vector<const dpsco::ExperimentReport*>& reports) {
  int bad = 0;
  for (const auto* r : reports) {
    for (const auto& problem : dpsco::CheckReport(*r)) {
      std::cerr << "check failed: " << problem << "\n";
      ++bad;
    }
  }
  std::cout << (bad == 0 ? "checks passed\n" : "checks FAILED\n");
  return bad == 0 ? 0 : 1;
}

std::vector<double> ParseValues(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private convex optimization experiments"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run trials of one configuration");
  AddCommon(run, run_args);

  CommonArgs sweep_args;
  std::string axis = "N";
  std::string values = "256,512,1024,2048,4096";
  std::string svg;
  CLI::App* sweep = app.add_subcommand("sweep", "run a configuration over a grid of one variable");
  AddCommon(sweep, sweep_args);
  sweep->add_option("--axis", axis, "N | d | eps");
  sweep->add_option("--values", values, "comma-separated grid values");
  sweep->add_option("--svg", svg, "also write a log-log plot of mean excess risk");

  double G = 1.0, eps = 1.0, delta = 1e-5, c1 = 1.0, c2 = 8.0, sfactor = 1.0, sigma = -1.0;
  std::uint64_t B = 10, T = 100, N = 1000;
  CLI::App* account = app.add_subcommand("account", "print the privacy budget pipeline as JSON");
  account->add_option("--G", G, "Lipschitz constant");
  account->add_option("--B", B, "batch size");
  account->add_option("--T", T, "iterations");
  account->add_option("--N", N, "samples");
  account->add_option("--eps", eps, "target epsilon");
  account->add_option("--delta", delta, "target delta");
  account->add_option("--c1", c1, "constant c1");
  account->add_option("--c2", c2, "constant c2");
  account->add_option("--sensitivity-factor", sfactor, "sensitivity as a multiple of G");
  account->add_option("--sigma", sigma, "use this noise level instead of calibrating");

  std::string csv_path, x_col = "N", y_col = "excess_empirical_risk", svg_out;
  CLI::App* report = app.add_subcommand("report", "summarize a trial CSV and fit a rate");
  report->add_option("--csv", csv_path, "trial CSV")->required();
  report->add_option("--x", x_col, "x column");
  report->add_option("--y", y_col, "y column");
  report->add_option("--svg", svg_out, "write a log-log SVG plot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = ToConfig(run_args);
      const auto rep = dpsco::RunExperiment(cfg);
      dpsco::WriteTextFile(run_args.out + "/report.json", dpsco::ReportJson(rep));
      dpsco::WriteTextFile(run_args.out + "/trials.csv", dpsco::ReportCsv(rep));
      PrintSummary(rep);
      if (run_args.check) return CheckAll({&rep});
      return 0;
    }
    if (*sweep) {
      const auto cfg = ToConfig(sweep_args);
      const std::map<std::string, dpsco::SweepAxis> axes{
          {"N", dpsco::SweepAxis::kN}, {"d", dpsco::SweepAxis::kDim}, {"eps", dpsco::SweepAxis::kEps}};
      const auto it = axes.find(axis);
      if (it == axes.end()) throw CLI::ValidationError("--axis", "unknown axis " + axis);
      const auto sw = dpsco::RunSweep(cfg, it->second, ParseValues(values));
      dpsco::WriteTextFile(sweep_args.out + "/sweep.json", dpsco::SweepJson(sw));
      const std::string csv = dpsco::SweepCsv(sw);
      dpsco::WriteTextFile(sweep_args.out + "/sweep.csv", csv);
      for (const auto& p : sw.points) PrintSummary(p);
      std::cout << "slope of excess empirical risk vs " << axis << ": " << sw.risk_slope << "\n";
      if (!std::isnan(sw.population_slope)) {
        std::cout << "slope of excess population loss vs " << axis << ": " << sw.population_slope
                  << "\n";
      }
      std::cout << "slope of gradient count vs " << axis << ": " << sw.count_slope << "\n";
      if (!svg.empty()) {
        const std::string col = axis == "N" ? "N" : axis == "d" ? "d" : "eps";
        dpsco::WriteTextFile(svg, dpsco::SvgRatePlot(csv, col, "excess_empirical_risk"));
      }
      if (sweep_args.check) {
        std::vector<const dpsco::ExperimentReport*> reps;
        for (const auto& p : sw.points) reps.push_back(&p);
        return CheckAll(reps);
      }
      return 0;
    }
    if (*account) {
      const dpsco::AccountantConstants consts{c1, c2, sfactor};
      const dpsco::ApproxDpBudget target{eps, delta};
      if (sigma >= 0.0) {
        const auto pipe = dpsco::RunPipeline(G, B, T, N, sigma, delta, consts);
        std::cout << dpsco::PipelineJson(pipe, &target) << "\n";
      } else {
        const auto cal = dpsco::CalibrateSigma(G, B, T, N, target, consts);
        std::cout << dpsco::PipelineJson(cal.pipeline, &target) << "\n";
      }
      return 0;
    }
    if (*report) {
      const std::string csv = dpsco::ReadTextFile(csv_path);
      std::vector<double> xs, ys;
      for (const auto& [x, y] : dpsco::ColumnMeans(csv, x_col, y_col)) {
        std::cout << x_col << "=" << x << "  mean " << y_col << "=" << y << "\n";
        if (x > 0.0 && y > 0.0) {
          xs.push_back(x);
          ys.push_back(y);
        }
      }
      if (xs.size() >= 2) std::cout << "log-log slope: " << dpsco::LogLogSlope(xs, ys) << "\n";
      if (!svg_out.empty()) dpsco::WriteTextFile(svg_out, dpsco::SvgRatePlot(csv, x_col, y_col));
      return 0;
    }
  } catch (const dpsco::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
