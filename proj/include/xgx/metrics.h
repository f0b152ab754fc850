/*
 * Copyright 2026 The xgx Authors.
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

#ifndef XGX_METRICS_H_
#define XGX_METRICS_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xgx/event_data.h"
#include "xgx/xg_model.h"

namespace xgx {

// Expected-goal totals for a subject. "Taken" sums run over the subject's
// own shots, "conceded" sums over shots taken against its team. The
// on-target variants (xgot, xgaot) sum model predictions of on-target shots.
struct MetricReport {
  std::string group;
  size_t shots = 0;
  size_t shots_conceded = 0;
  double xg = 0.0;
  double xgot = 0.0;
  double xga = 0.0;
  double xgaot = 0.0;
  int goals = 0;
  int goals_conceded = 0;
  double delta = 0.0;  // goals - xg
  double xg_per_shot = 0.0;
  std::optional<double> xga_per_shot;
};

struct MetricOptions {
  bool exclude_penalties = false;
};

// Index sets a subject resolves to. The conceded set is only defined when
// the subject names a team; its player filter is dropped.
struct SubjectRows {
  std::vector<size_t> taken;
  std::vector<size_t> conceded;
};

SubjectRows ResolveSubject(const EncodedDataset& data,
                           const GroupSelector& subject,
                           const MetricOptions& options = {});

// `predictions` is aligned with the dataset rows (only the indexed entries
// are read). Throws Error(kEmptyGroup) when `taken` is empty.
MetricReport MetricsFromPredictions(std::span<const double> predictions,
                                    const EncodedDataset& data,
                                    std::span<const size_t> taken,
                                    std::span<const size_t> conceded,
                                    std::string group = {});

MetricReport ComputeMetrics(const Predictor& model, const EncodedDataset& data,
                            const GroupSelector& subject,
                            const MetricOptions& options = {});

// Actual goals minus xG: negative means under-performance.
double PerformanceDelta(const MetricReport& report);

nlohmann::json ToJson(const MetricReport& report);

// One row per report, league-table style.
void WriteMetricsCsv(std::ostream& out, std::span<const MetricReport> reports);

}  // namespace xgx

#endif  // XGX_METRICS_H_
