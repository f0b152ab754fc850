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

#include "xgx/glocal.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xgx/parallel.h"
#include "xgx/status.h"

namespace xgx {

std::string_view ToString(AggregationMode mode) {
  return mode == AggregationMode::kMean ? "mean" : "sum";
}

std::optional<AggregationMode> ParseAggregationMode(std::string_view s) {
  if (s == "mean") return AggregationMode::kMean;
  if (s == "sum") return AggregationMode::kSum;
  return std::nullopt;
}

AggregatedAttribution AggregateShap(std::span<const Attribution> members,
                                    AggregationMode mode, std::string group) {
  if (members.empty()) throw Error(ErrorCode::kEmptyGroup, "no attributions");
  const Attribution& first = members.front();
  const size_t p = first.phi.size();
  for (const Attribution& a : members) {
    if (std::abs(a.phi0 - first.phi0) > kBaselineTolerance) {
      throw Error(ErrorCode::kMixedBaselines,
                  "attributions were computed against different backgrounds");
    }
    if (a.features != first.features || a.phi.size() != p) {
      throw Error(ErrorCode::kInvalidArgument,
                  "attributions have different feature sets");
    }
  }
  const size_t n = members.size();
  const double count = static_cast<double>(n);

  AggregatedAttribution out;
  out.group = std::move(group);
  out.n = n;
  out.mode = mode;
  out.phi0 = first.phi0;
  out.features = first.features;
  out.phi.assign(p, 0.0);
  out.phi_sd.assign(p, 0.0);
  for (const Attribution& a : members) {
    for (size_t j = 0; j < p; ++j) out.phi[j] += a.phi[j];
    out.mean_prediction += a.prediction;
  }
  out.mean_prediction /= count;
  for (size_t j = 0; j < p; ++j) out.phi[j] /= count;
  if (n > 1) {
    for (size_t j = 0; j < p; ++j) {
      double ss = 0.0;
      for (const Attribution& a : members) {
        const double d = a.phi[j] - out.phi[j];
        ss += d * d;
      }
      out.phi_sd[j] = std::sqrt(ss / (count - 1.0));
    }
  }
  if (mode == AggregationMode::kSum) {
    for (double& v : out.phi) v *= count;
  }
  return out;
}

nlohmann::json ToJson(const AggregatedAttribution& a) {
  nlohmann::json phi = nlohmann::json::object();
  nlohmann::json sd = nlohmann::json::object();
  for (size_t j = 0; j < a.features.size(); ++j) {
    phi[a.features[j]] = a.phi[j];
    sd[a.features[j]] = a.phi_sd[j];
  }
  return {{"group", a.group},
          {"n", a.n},
          {"mode", ToString(a.mode)},
          {"phi0", a.phi0},
          {"phi_bar", phi},
          {"phi_sd", sd},
          {"mean_prediction", a.mean_prediction}};
}

// ---------------------------------------------------------------------------
// Profiles

Grid MakeGrid(const EncodedDataset& data, std::string_view feature,
              int points) {
  const FeatureSpec& spec = data.encoding.Feature(feature);
  Grid grid;
  grid.feature = spec.name;
  grid.kind = spec.kind;
  if (spec.kind == FeatureKind::kCategorical) {
    grid.levels = spec.levels;
    return grid;
  }
  if (data.size() == 0) throw Error(ErrorCode::kEmptyInput, "empty dataset");
  if (points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2 points");
  }
  std::vector<double> sorted(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    sorted[i] = data.features(i, spec.offset);
  }
  std::sort(sorted.begin(), sorted.end());
  const double last = static_cast<double>(sorted.size() - 1);
  for (int q = 0; q < points; ++q) {
    // Linear interpolation between order statistics.
    const double h = last * static_cast<double>(q) / static_cast<double>(points - 1);
    const size_t lo = static_cast<size_t>(std::floor(h));
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double v = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    if (grid.values.empty() || v > grid.values.back()) grid.values.push_back(v);
  }
  return grid;
}

std::string_view ToString(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kCp: return "CP";
    case ProfileKind::kAp: return "AP";
    case ProfileKind::kPdp: return "PDP";
  }
  return "";
}

void ApplyGridPoint(const FeatureSpec& spec, const Grid& grid, size_t index,
                    std::span<double> row) {
  if (spec.kind == FeatureKind::kContinuous) {
    row[spec.offset] = grid.values[index];
    return;
  }
  std::fill_n(row.begin() + static_cast<std::ptrdiff_t>(spec.offset), spec.width, 0.0);
  const auto level = spec.LevelIndex(grid.levels[index]);
  if (!level) throw Error(ErrorCode::kUnknownLevel, spec.name + "=" + grid.levels[index]);
  row[spec.offset + *level] = 1.0;
}

namespace {

void CheckGrid(const FeatureSpec& spec, const Grid& grid) {
  if (grid.feature != spec.name || grid.kind != spec.kind || grid.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid does not describe feature " + spec.name);
  }
  for (size_t i = 1; i < grid.values.size(); ++i) {
    if (!(grid.values[i] > grid.values[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "continuous grid must be strictly increasing");
    }
  }
}

void EvaluateProfile(const Predictor& model, const FeatureSpec& spec,
                     std::span<const double> x, const Grid& grid,
                     std::span<double> out) {
  std::vector<double> probe(x.begin(), x.end());
  for (size_t g = 0; g < grid.size(); ++g) {
    ApplyGridPoint(spec, grid, g, probe);
    out[g] = model.Predict(probe);
  }
}

}  // namespace

Profile CpProfile(const Predictor& model, const FeatureEncoding& encoding,
                  std::span<const double> x, std::string_view feature,
                  const Grid& grid) {
  const FeatureSpec& spec = encoding.Feature(feature);
  CheckGrid(spec, grid);
  if (x.size() != model.dim() || x.size() != encoding.num_columns()) {
    throw Error(ErrorCode::kDimensionMismatch, "observation width");
  }
  Profile profile;
  profile.feature = spec.name;
  profile.kind = ProfileKind::kCp;
  profile.k = 1;
  profile.grid = grid;
  if (spec.kind == FeatureKind::kContinuous) {
    const double own = x[spec.offset];
    auto& values = profile.grid.values;
    const auto it = std::lower_bound(values.begin(), values.end(), own);
    if (it == values.end() || *it != own) values.insert(it, own);
    profile.group_feature_mean = own;
  }
  profile.values.resize(profile.grid.size());
  EvaluateProfile(model, spec, x, profile.grid, profile.values);
  return profile;
}

Profile AggregateProfiles(const Predictor& model, const EncodedDataset& data,
                          std::span<const size_t> rows,
                          std::string_view feature, const Grid& grid,
                          int threads) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyGroup, "no rows to profile");
  const FeatureSpec& spec = data.encoding.Feature(feature);
  CheckGrid(spec, grid);
  if (data.features.cols() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "dataset width != model dim");
  }
  const size_t g = grid.size();
  Matrix member_values(rows.size(), g);
  ParallelFor(
      rows.size(),
      [&](size_t i) {
        EvaluateProfile(model, spec, data.row(rows[i]), grid,
                        member_values.row(i));
      },
      threads);

  Profile profile;
  profile.feature = spec.name;
  profile.kind = ProfileKind::kAp;
  profile.k = rows.size();
  profile.grid = grid;
  // Mean taken as first + sum(v - first) / k so a flat set of curves
  // averages to exactly its common value.
  const double k = static_cast<double>(rows.size());
  profile.values.assign(g, 0.0);
  for (size_t i = 1; i < rows.size(); ++i) {
    for (size_t z = 0; z < g; ++z) {
      profile.values[z] += member_values(i, z) - member_values(0, z);
    }
  }
  for (size_t z = 0; z < g; ++z) {
    profile.values[z] = member_values(0, z) + profile.values[z] / k;
  }
  if (spec.kind == FeatureKind::kContinuous) {
    double sum = 0.0;
    for (size_t r : rows) sum += data.features(r, spec.offset);
    profile.group_feature_mean = sum / k;
  }
  return profile;
}

Profile Pdp(const Predictor& model, const EncodedDataset& data,
            std::string_view feature, const Grid& grid, int threads) {
  std::vector<size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), size_t{0});
  Profile profile = AggregateProfiles(model, data, rows, feature, grid, threads);
  profile.kind = ProfileKind::kPdp;
  return profile;
}

nlohmann::json GridValuesJson(const Grid& grid) {
  if (grid.kind == FeatureKind::kContinuous) return grid.values;
  return grid.levels;
}

nlohmann::json ToJson(const Profile& p) {
  nlohmann::json j = {{"feature", p.feature},
                      {"kind", ToString(p.kind)},
                      {"k", p.k},
                      {"grid", GridValuesJson(p.grid)},
                      {"values", p.values}};
  j["group_feature_mean"] =
      p.group_feature_mean ? nlohmann::json(*p.group_feature_mean) : nlohmann::json();
  return j;
}

}  // namespace xgx
