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

#ifndef XGX_ANALYSIS_H_
#define XGX_ANALYSIS_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "xgx/event_data.h"
#include "xgx/glocal.h"
#include "xgx/metrics.h"
#include "xgx/shapley.h"
#include "xgx/xg_model.h"

namespace xgx {

enum class Workflow { kScoringPotential, kGoalkeeperBlindspot, kSeasonComparison };

std::string_view ToString(Workflow workflow);
// Accepts both "scoring_potential" and "scoring-potential" spellings.
std::optional<Workflow> ParseWorkflow(std::string_view name);

inline const std::vector<std::string> kScoringDefaultFeatures = {
    "distance_to_goal", "angle_to_goal"};
inline const std::vector<std::string> kBlindspotDefaultFeatures = {
    "situation", "shot_type", "home_away"};

struct AnalysisConfig {
  int grid_points = kDefaultGridPoints;
  size_t background_size = kDefaultBackgroundSize;
  uint64_t seed = 42;
  ShapOptions shap;  // shap.seed is replaced by `seed`.
  AggregationMode mode = AggregationMode::kMean;
  int threads = 0;

  nlohmann::json ToJson() const;
};

struct SubjectSpec {
  std::string label;
  GroupSelector selector;
};

struct Subject {
  std::string label;
  GroupSelector selector;
  std::vector<size_t> rows;
  std::string warning;  // Set when the subject was skipped.

  bool skipped() const { return rows.empty(); }
};

// Profiles of every subject for one feature, on a shared grid.
struct FeatureComparison {
  std::string feature;
  Grid grid;
  std::vector<std::optional<Profile>> profiles;  // Aligned with subjects.
  // Mean of the feature over all subjects' rows pooled (continuous only).
  std::optional<double> reference_mean;
  // Competition ranks per subject and grid point; empty for skipped
  // subjects. Rank 1 is best.
  std::vector<std::vector<int>> ranks;
  // Goalkeeper workflow only: flagged level per subject.
  std::vector<std::optional<std::string>> blind_spots;
};

struct SeasonDelta {
  std::string feature;
  double from = 0.0;
  double to = 0.0;
  double delta = 0.0;
};

struct AnalysisReport {
  Workflow workflow = Workflow::kScoringPotential;
  nlohmann::json created_from;
  std::vector<Subject> subjects;
  std::vector<FeatureComparison> features;
  // Season comparison: one aggregate and one metric report per season.
  std::vector<AggregatedAttribution> attributions;
  std::vector<MetricReport> metrics;
  std::vector<std::string> seasons;
  // Sorted by descending |delta|.
  std::vector<SeasonDelta> deltas;
};

// Aggregated profiles per player and feature; players are ranked by AP
// value at each grid point (higher is better). Players without shots are
// skipped with a warning; throws Error(kEmptyGroup) when all are empty.
AnalysisReport ScoringPotential(const Predictor& model,
                                const EncodedDataset& data,
                                std::span<const SubjectSpec> players,
                                std::span<const std::string> features,
                                const AnalysisConfig& config = {});

// Aggregated profiles over the on-target shots each keeper's team
// conceded. Keepers are ranked per level (lower is better) and the level
// where a keeper ranks worst is flagged, when that rank is worse than the
// keeper's best. Selectors are narrowed to role=conceded, on_target=1.
AnalysisReport GoalkeeperBlindspot(const Predictor& model,
                                   const EncodedDataset& data,
                                   std::span<const SubjectSpec> keepers,
                                   std::span<const std::string> features,
                                   const AnalysisConfig& config = {});

// Aggregated SHAP of a team's shots in two seasons against one shared
// background, plus per-season metrics and the per-feature change.
// Throws Error(kEmptyGroup) when either season has no shots.
AnalysisReport SeasonComparison(const Predictor& model,
                                const EncodedDataset& data,
                                const std::string& team,
                                const std::pair<std::string, std::string>& seasons,
                                const AnalysisConfig& config = {});

nlohmann::json ToJson(const AnalysisReport& report);

// Writes one SVG per figure into out_dir and returns the paths in order:
// one chart per profiled feature, or one aSHAP chart per season.
// Throws Error(kIo).
std::vector<std::string> RenderSvg(const AnalysisReport& report,
                                   const std::string& out_dir);

// SVG documents keyed by file name, without touching the filesystem.
std::vector<std::pair<std::string, std::string>> RenderSvgDocuments(
    const AnalysisReport& report);

}  // namespace xgx

#endif  // XGX_ANALYSIS_H_
