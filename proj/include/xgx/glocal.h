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

#ifndef XGX_GLOCAL_H_
#define XGX_GLOCAL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xgx/event_data.h"
#include "xgx/shapley.h"
#include "xgx/xg_model.h"

namespace xgx {

// ---------------------------------------------------------------------------
// Aggregated SHAP

enum class AggregationMode { kMean, kSum };

std::string_view ToString(AggregationMode mode);
std::optional<AggregationMode> ParseAggregationMode(std::string_view s);

struct AggregatedAttribution {
  std::string group;
  size_t n = 0;
  AggregationMode mode = AggregationMode::kMean;
  double phi0 = 0.0;
  std::vector<std::string> features;
  // Mean of the member values in mean mode; n times that mean in sum mode.
  std::vector<double> phi;
  // Sample standard deviation of member values (0 for n == 1).
  std::vector<double> phi_sd;
  double mean_prediction = 0.0;
};

inline constexpr double kBaselineTolerance = 1e-12;

// Aggregates member attributions that share a background. Throws
// Error(kEmptyGroup), Error(kMixedBaselines) when phi0 differs by more
// than kBaselineTolerance, Error(kInvalidArgument) on differing features.
AggregatedAttribution AggregateShap(std::span<const Attribution> members,
                                    AggregationMode mode = AggregationMode::kMean,
                                    std::string group = {});

nlohmann::json ToJson(const AggregatedAttribution& a);

// ---------------------------------------------------------------------------
// Profiles

// Probe values for one feature. Continuous grids hold strictly increasing
// `values`; categorical grids hold `levels` in encoding order.
struct Grid {
  std::string feature;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<double> values;
  std::vector<std::string> levels;

  size_t size() const {
    return kind == FeatureKind::kContinuous ? values.size() : levels.size();
  }
};

inline constexpr int kDefaultGridPoints = 101;

// Quantiles at 0, 1/(points-1), ..., 1 of the feature over every dataset
// row, with duplicates removed. Categorical features get all encoding
// levels. Throws Error(kUnknownFeature), Error(kEmptyInput).
Grid MakeGrid(const EncodedDataset& data, std::string_view feature,
              int points = kDefaultGridPoints);

enum class ProfileKind { kCp, kAp, kPdp };
std::string_view ToString(ProfileKind kind);

struct Profile {
  std::string feature;
  ProfileKind kind = ProfileKind::kCp;
  size_t k = 1;
  Grid grid;
  std::vector<double> values;
  // Mean raw feature value over the profiled rows; continuous only.
  std::optional<double> group_feature_mean;
};

// Writes grid point `index` into the feature's columns of `row`.
void ApplyGridPoint(const FeatureSpec& spec, const Grid& grid, size_t index,
                    std::span<double> row);

// Ceteris-paribus profile of one observation. For continuous features the
// observation's own value is inserted into the grid when missing, so the
// profile always passes through f(x).
Profile CpProfile(const Predictor& model, const FeatureEncoding& encoding,
                  std::span<const double> x, std::string_view feature,
                  const Grid& grid);

// Pointwise mean of the member CP profiles on a shared grid (no
// insertion). Throws Error(kEmptyGroup).
Profile AggregateProfiles(const Predictor& model, const EncodedDataset& data,
                          std::span<const size_t> rows,
                          std::string_view feature, const Grid& grid,
                          int threads = 0);

// AggregateProfiles over every row, tagged as a partial dependence profile.
Profile Pdp(const Predictor& model, const EncodedDataset& data,
            std::string_view feature, const Grid& grid, int threads = 0);

nlohmann::json GridValuesJson(const Grid& grid);
nlohmann::json ToJson(const Profile& profile);

}  // namespace xgx

#endif  // XGX_GLOCAL_H_
