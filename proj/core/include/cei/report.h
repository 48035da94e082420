/*
 * Copyright 2026 The CEI Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serialization of metric reports: versioned JSON (lossless, parseable) and
// markdown tables laid out with metrics as rows and datasets or scenarios as
// columns, plus the CEI percentile x weight sweep grid.

#ifndef CEI_REPORT_H_
#define CEI_REPORT_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cei/fairness_metrics.h"

namespace cei {

std::string RenderReportJson(const MetricReport& report);
MetricReport ParseReportJson(std::string_view text);

// A labelled report, e.g. {"BG", report}.
using LabelledReport = std::pair<std::string, MetricReport>;

// Headline configuration for the single-configuration CEI rows.
struct HeadlineCei {
  double percentile = 95.0;
  WeightPair weights{0.8, 0.2};
};

// Metric rows (DFI_N, DFI_E, GARBE_FMR, GARBE_FNMR, IN_FMR, IN_FNMR and the
// four CEI rows at the headline configuration) by report columns. Rows of
// metrics that no report selected are omitted.
std::string RenderMetricTable(const std::vector<LabelledReport>& reports,
                              const HeadlineCei& headline = {});

// CEI_N sweep: one row group per percentile, one row per weight set; a
// Genuine and an Impostor column group, each with one column per report.
std::string RenderCeiSweepTable(const std::vector<LabelledReport>& reports);

// Full human-readable rendering of one report: provenance, metric table,
// sweep, group rates, flags and failures.
std::string RenderReportMarkdown(const MetricReport& report,
                                 const HeadlineCei& headline = {});

// True when every computed value sits at its no-bias value within tol:
// DFI and CEI near 1, GARBE near 0, IN near 1.
bool AtFairPoint(const MetricReport& report, double tol);

std::string FormatMetric(const MetricValue& v);

}  // namespace cei

#endif  // CEI_REPORT_H_
