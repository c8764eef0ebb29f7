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

#include "dpsco/report.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dpsco/error.h"
#include "json.hpp"

namespace dpsco {
namespace {

using nlohmann::json;

json VectorJson(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json SummaryJson(const Summary& s) { return {{"mean", s.mean}, {"std", s.std}, {"n", s.n}}; }

json ConfigJson(const ExperimentConfig& c) {
  json j;
  j["task"] = {{"kind", std::string(TaskName(c.task.kind))},
               {"N", c.task.N},
               {"d", c.task.d},
               {"label_noise", c.task.label_noise},
               {"domain_radius", c.task.domain_radius},
               {"expansion_r", c.task.expansion_r}};
  if (c.task.kind == TaskKind::kStronglyConvexHinge) {
    j["task"]["reg_lambda"] = c.task.reg_lambda;
    j["task"]["reg_offset"] = c.task.reg_offset;
  }
  if (c.task.kind == TaskKind::kQuadratic) {
    j["task"]["quad_scale"] = c.task.quad_scale;
    j["task"]["quad_mean_norm"] = c.task.quad_mean_norm;
    j["task"]["quad_spread"] = c.task.quad_spread;
  }
  if (c.task.start) j["task"]["start"] = VectorJson(*c.task.start);
  j["algo"] = std::string(AlgoName(c.algo));
  j["budget"] = {{"epsilon", c.budget.epsilon}, {"delta", c.budget.delta}};
  j["seeds"] = c.seeds;
  j["constants"] = {{"c1", c.consts.c1},
                    {"c2", c.consts.c2},
                    {"sensitivity_factor", c.consts.sensitivity_factor}};
  if (c.algo == Algo::kDpsgdBaseline) {
    j["dpsgd"] = {{"step_cap", c.dpsgd.step_cap}};
    if (c.dpsgd.steps) j["dpsgd"]["steps"] = *c.dpsgd.steps;
  }
  j["population_mc"] = c.population_mc;
  j["threads"] = c.threads;
  return j;
}

json PhaseJson(const PhaseRecord& p) {
  json j = {{"stage", p.stage},
            {"phase", p.phase},
            {"eps", p.eps},
            {"delta", p.delta},
            {"N", p.N},
            {"T", p.T},
            {"B", p.B},
            {"sigma", p.sigma},
            {"r", p.r},
            {"mu", p.mu},
            {"gradient_count", p.gradient_count},
            {"spent_eps", p.spent_eps},
            {"risk", p.risk}};
  if (p.outer) j["outer"] = p.outer;
  if (p.ball_radius > 0.0) j["ball_radius"] = p.ball_radius;
  if (p.reg_lambda > 0.0) j["reg_lambda"] = p.reg_lambda;
  if (p.skipped) j["skipped"] = true;
  if (!p.note.empty()) j["note"] = p.note;
  return j;
}

json TrialJson(const TrialResult& t, bool timing) {
  json j = {{"seed", t.seed}, {"ok", t.ok}};
  if (!t.ok) {
    j["error"] = t.error;
    return j;
  }
  j["digest"] = t.digest;
  j["excess_empirical_risk"] = t.excess_empirical_risk;
  if (t.excess_population_loss) j["excess_population_loss"] = *t.excess_population_loss;
  j["reference"] = {{"value", t.reference_value}, {"certified", t.reference_certified}};
  j["gradient_count"] = t.gradient_count;
  j["spent"] = {{"epsilon", t.spent.epsilon}, {"delta", t.spent.delta}};
  if (timing) j["wall_time"] = t.wall_time;
  json phases = json::array();
  for (const auto& p : t.phases) phases.push_back(PhaseJson(p));
  j["phases"] = std::move(phases);
  return j;
}

json ReportObject(const ExperimentReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = ConfigJson(r.config);
  json trials = json::array();
  for (const auto& t : r.trials) trials.push_back(TrialJson(t, r.config.record_timing));
  j["trials"] = std::move(trials);
  j["aggregate"] = {{"excess_empirical_risk", SummaryJson(r.excess_empirical)},
                    {"gradient_count", SummaryJson(r.gradient_count)},
                    {"failures", r.failures}};
  if (r.excess_population.n > 0) {
    j["aggregate"]["excess_population_loss"] = SummaryJson(r.excess_population);
  }
  return j;
}

std::string AxisName(SweepAxis a) {
  switch (a) {
    case SweepAxis::kN:
      return "N";
    case SweepAxis::kDim:
      return "d";
    case SweepAxis::kEps:
      return "eps";
  }
  return "?";
}

json SlopeJson(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string ReportJson(const ExperimentReport& report) { return ReportObject(report).dump(2) + "\n"; }

std::string SweepJson(const SweepReport& sweep) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["axis"] = AxisName(sweep.axis);
  j["values"] = sweep.values;
  j["slopes"] = {{"excess_empirical_risk", SlopeJson(sweep.risk_slope)},
                 {"excess_population_loss", SlopeJson(sweep.population_slope)},
                 {"gradient_count", SlopeJson(sweep.count_slope)}};
  json points = json::array();
  for (const auto& p : sweep.points) points.push_back(ReportObject(p));
  j["points"] = std::move(points);
  return j.dump(2) + "\n";
}

std::string ReportCsv(const ExperimentReport& r, bool header) {
  const bool timing = r.config.record_timing;
  std::ostringstream os;
  if (header) {
    os << "task,algo,N,d,eps,delta,seed,ok,excess_empirical_risk,excess_population_loss,"
          "gradient_count,spent_eps,spent_delta,digest";
    if (timing) os << ",wall_time";
    os << '\n';
  }
  const ExperimentConfig& c = r.config;
  for (const TrialResult& t : r.trials) {
    os << TaskName(c.task.kind) << ',' << AlgoName(c.algo) << ',' << c.task.N << ',' << c.task.d
       << ',' << Fmt(c.budget.epsilon) << ',' << Fmt(c.budget.delta) << ',' << t.seed << ','
       << (t.ok ? 1 : 0) << ',';
    if (t.ok) {
      os << Fmt(t.excess_empirical_risk) << ',';
      if (t.excess_population_loss) os << Fmt(*t.excess_population_loss);
      os << ',' << t.gradient_count << ',' << Fmt(t.spent.epsilon) << ',' << Fmt(t.spent.delta)
         << ',' << t.digest;
    } else {
      os << ",,,,,";
    }
    if (timing) os << ',' << Fmt(t.wall_time);
    os << '\n';
  }
  return os.str();
}

std::string SweepCsv(const SweepReport& sweep) {
  std::string out;
  bool first = true;
  for (const auto& p : sweep.points) {
    out += ReportCsv(p, first);
    first = false;
  }
  return out;
}

std::vector<std::pair<double, double>> ColumnMeans(const std::string& csv_text,
                                                  const std::string& x_col,
                                                  const std::string& y_col) {
  std::istringstream in(csv_text);
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)), "CSV is empty");
  const auto header = SplitCsv(line);
  const long xi = std::find(header.begin(), header.end(), x_col) - header.begin();
  const long yi = std::find(header.begin(), header.end(), y_col) - header.begin();
  Require(xi < static_cast<long>(header.size()) && yi < static_cast<long>(header.size()),
          "CSV column not found");
  std::map<double, std::pair<double, int>> acc;
  while (std::getline(in, line)) {
    const auto cells = SplitCsv(line);
    if (static_cast<long>(cells.size()) <= std::max(xi, yi)) continue;
    if (cells[xi].empty() || cells[yi].empty()) continue;
    auto& a = acc[std::stod(cells[xi])];
    a.first += std::stod(cells[yi]);
    a.second += 1;
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& [x, a] : acc) out.emplace_back(x, a.first / a.second);
  return out;
}

std::string SvgRatePlot(const std::string& csv_text, const std::string& x_col,
                        const std::string& y_col) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [x, mean] : ColumnMeans(csv_text, x_col, y_col)) {
    if (x > 0.0 && mean > 0.0) pts.emplace_back(std::log10(x), std::log10(mean));
  }
  Require(pts.size() >= 1, "plot: no positive points");
  double x0 = pts.front().first, x1 = pts.back().first;
  double y0 = pts.front().second, y1 = y0;
  for (const auto& p : pts) {
    y0 = std::min(y0, p.second);
    y1 = std::max(y1, p.second);
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  const double W = 480, H = 320, M = 50;
  auto px = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  auto py = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
     << "\" stroke=\"black\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const auto& p : pts) os << px(p.first) << ',' << py(p.second) << ' ';
  os << "\"/>\n";
  for (const auto& p : pts) {
    os << "<circle cx=\"" << px(p.first) << "\" cy=\"" << py(p.second)
       << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">log10 " << x_col
     << "</text>\n";
  os << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
     << ")\" text-anchor=\"middle\">log10 mean " << y_col << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void WriteTextFile(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  Require(static_cast<bool>(out), "cannot open " + path + " for writing");
  out << content;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dpsco
