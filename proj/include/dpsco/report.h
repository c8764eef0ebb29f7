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

#ifndef DPSCO_REPORT_H_
#define DPSCO_REPORT_H_

#include <string>
#include <utility>
#include <vector>

#include "dpsco/harness.h"

namespace dpsco {

inline constexpr int kReportSchemaVersion = 1;

std::string ReportJson(const ExperimentReport& report);
std::string SweepJson(const SweepReport& sweep);

// One row per trial. Wall time is included only when the config asks for it,
// so that reports stay byte-stable under fixed seeds.
std::string ReportCsv(const ExperimentReport& report, bool header = true);
std::string SweepCsv(const SweepReport& sweep);

// Per-distinct-x mean of column y_col, sorted by x.
std::vector<std::pair<double, double>> ColumnMeans(const std::string& csv_text,
                                                  const std::string& x_col,
                                                  const std::string& y_col);

// Log-log plot of the per-x mean of column `y_col` against column `x_col` of
// a trial CSV.
std::string SvgRatePlot(const std::string& csv_text, const std::string& x_col,
                        const std::string& y_col);

void WriteTextFile(const std::string& path, const std::string& content);
std::string ReadTextFile(const std::string& path);

}  // namespace dpsco

#endif  // DPSCO_REPORT_H_
