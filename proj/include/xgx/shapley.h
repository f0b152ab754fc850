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

#ifndef XGX_SHAPLEY_H_
#define XGX_SHAPLEY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xgx/event_data.h"
#include "xgx/matrix.h"
#include "xgx/xg_model.h"

namespace xgx {

// A set of encoded columns that enters or leaves a coalition together.
struct FeatureGroup {
  std::string name;
  std::vector<size_t> columns;
};

// Partition of the encoded columns into Shapley players.
class FeatureGrouping {
 public:
  // Throws Error(kInvalidArgument) unless the groups are disjoint, non-empty
  // and cover [0, num_columns).
  FeatureGrouping(std::vector<FeatureGroup> groups, size_t num_columns);

  // One player per raw feature; the one-hot block of a categorical is a
  // single player.
  static FeatureGrouping FromEncoding(const FeatureEncoding& encoding);
  // One player per column, named x0, x1, ...
  static FeatureGrouping Singletons(size_t num_columns);

  size_t size() const { return groups_.size(); }
  size_t num_columns() const { return num_columns_; }
  const std::vector<FeatureGroup>& groups() const { return groups_; }
  std::vector<std::string> names() const;

 private:
  std::vector<FeatureGroup> groups_;
  size_t num_columns_;
};

// Reference rows used to fill in features that are absent from a coalition.
struct BackgroundSet {
  Matrix rows;
  uint64_t seed = 0;

  size_t size() const { return rows.rows(); }
};

inline constexpr size_t kDefaultBackgroundSize = 100;

// Draws min(size, pool.size()) distinct rows from `pool` (all rows when
// empty). Throws Error(kEmptyInput) when nothing can be drawn.
BackgroundSet SampleBackground(const EncodedDataset& data,
                               std::span<const size_t> pool, size_t size,
                               uint64_t seed);

// Bit g set means group g takes its value from the explained row.
using Coalition = uint64_t;

// Interventional value of a coalition: the mean prediction over background
// rows with the coalition's columns replaced by x. The full coalition
// returns f(x) itself.
double ValueFunction(const Predictor& model, std::span<const double> x,
                     Coalition coalition, const BackgroundSet& background,
                     const FeatureGrouping& grouping);

enum class ShapMethod { kExact, kSampled };

struct Attribution {
  std::string observation_id;
  double phi0 = 0.0;
  std::vector<std::string> features;
  std::vector<double> phi;
  double prediction = 0.0;
  ShapMethod method = ShapMethod::kExact;
  int n_perm = 0;          // Sampled only.
  std::vector<double> se;  // Sampled only; standard error per feature.

  // phi0 + sum(phi).
  double Reconstruction() const;
};

inline constexpr size_t kMaxExactFeatures = 20;
inline constexpr size_t kDefaultExactLimit = 12;
inline constexpr int kDefaultPermutations = 2000;

// Exact Shapley values from all 2^p coalition values. Throws
// Error(kTooManyFeatures) for p > kMaxExactFeatures.
Attribution ExactShap(const Predictor& model, std::span<const double> x,
                      const BackgroundSet& background,
                      const FeatureGrouping& grouping, int threads = 0);

// Monte-Carlo estimate from `n_perm` random feature orderings. Every
// ordering telescopes to f(x) - phi0, so the estimate is locally accurate.
Attribution SampledShap(const Predictor& model, std::span<const double> x,
                        const BackgroundSet& background,
                        const FeatureGrouping& grouping, int n_perm,
                        uint64_t seed);

struct ShapOptions {
  // Unset: exact when the grouping has at most kDefaultExactLimit players.
  std::optional<ShapMethod> method;
  int n_perm = kDefaultPermutations;
  uint64_t seed = 42;
};

Attribution Explain(const Predictor& model, std::span<const double> x,
                    const BackgroundSet& background,
                    const FeatureGrouping& grouping,
                    const ShapOptions& options = {});

// Attributions for the listed dataset rows, computed in parallel. The
// sampling seed of each row is derived from (options.seed, row index), so
// results do not depend on the thread count.
std::vector<Attribution> ExplainRows(const Predictor& model,
                                     const EncodedDataset& data,
                                     std::span<const size_t> rows,
                                     const BackgroundSet& background,
                                     const FeatureGrouping& grouping,
                                     const ShapOptions& options = {},
                                     int threads = 0);

std::string_view ToString(ShapMethod method);
nlohmann::json ToJson(const Attribution& attribution);

}  // namespace xgx

#endif  // XGX_SHAPLEY_H_
