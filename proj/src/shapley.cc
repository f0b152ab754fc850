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

#include "xgx/shapley.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "xgx/parallel.h"
#include "xgx/status.h"
#include "xgx/xg_model.h"

namespace xgx {
namespace {

// Upper bound on coalitions x background rows for the tree table.
constexpr size_t kMaxTreeTableEntries = size_t{1} << 22;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void CheckWidths(const Predictor& model, std::span<const double> x,
                 const BackgroundSet& background,
                 const FeatureGrouping& grouping) {
  if (x.size() != model.dim() || grouping.num_columns() != model.dim() ||
      background.rows.cols() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row, background and grouping widths must equal model dim " +
                    std::to_string(model.dim()));
  }
  if (background.size() == 0) {
    throw Error(ErrorCode::kEmptyInput, "background set is empty");
  }
}

// Evaluates coalition values with a reusable hybrid-row buffer.
class CoalitionEvaluator {
 public:
  CoalitionEvaluator(const Predictor& model, std::span<const double> x,
                     const BackgroundSet& background,
                     const FeatureGrouping& grouping)
      : model_(model),
        x_(x),
        background_(background),
        grouping_(grouping),
        hybrid_(x.size()) {}

  double operator()(Coalition coalition) {
    const size_t p = grouping_.size();
    const Coalition full = p >= 64 ? ~Coalition{0} : (Coalition{1} << p) - 1;
    if (coalition == full) return model_.Predict(x_);
    columns_.clear();
    for (size_t g = 0; g < p; ++g) {
      if (coalition >> g & 1) {
        const auto& cols = grouping_.groups()[g].columns;
        columns_.insert(columns_.end(), cols.begin(), cols.end());
      }
    }
    // Mean as first + mean offset: B identical predictions average to that
    // prediction exactly, which keeps ignored features at exactly zero.
    double first = 0.0;
    double offset = 0.0;
    for (size_t b = 0; b < background_.size(); ++b) {
      const auto row = background_.rows.row(b);
      std::copy(row.begin(), row.end(), hybrid_.begin());
      for (size_t c : columns_) hybrid_[c] = x_[c];
      const double f = model_.Predict(hybrid_);
      if (b == 0) {
        first = f;
      } else {
        offset += f - first;
      }
    }
    return first + offset / static_cast<double>(background_.size());
  }

 private:
  const Predictor& model_;
  std::span<const double> x_;
  const BackgroundSet& background_;
  const FeatureGrouping& grouping_;
  std::vector<double> hybrid_;
  std::vector<size_t> columns_;
};

// Coalition values for a tree ensemble without per-row traversal. For one
// (tree, background row) pair, the hybrid row only matters at splits where
// x and the background row disagree, so a single walk yields every leaf the
// pair can reach together with the groups that must be in or out of the
// coalition to reach it. Leaf outputs are added in tree order, so each
// margin equals GbtModel::Margin of the corresponding hybrid row bitwise.
class TreeCoalitionTable {
 public:
  TreeCoalitionTable(const GbtModel& model, std::span<const double> x,
                     const BackgroundSet& background,
                     const FeatureGrouping& grouping)
      : model_(model), x_(x), background_(background) {
    owner_.assign(grouping.num_columns(), 0);
    for (size_t g = 0; g < grouping.size(); ++g) {
      for (size_t c : grouping.groups()[g].columns) owner_[c] = Coalition{1} << g;
    }
    full_ = (Coalition{1} << grouping.size()) - 1;
  }

  // Fills value[m] for every coalition mask m.
  void Fill(std::span<double> value, int threads) const {
    const size_t masks = value.size();
    const size_t rows = background_.size();
    std::vector<double> prob(rows * masks);
    ParallelFor(
        rows,
        [&](size_t b) {
          std::vector<double> margin(masks, model_.base_score());
          for (const RegressionTree& tree : model_.trees()) {
            Walk(tree, background_.rows.row(b), 0, 0, 0, margin);
          }
          for (size_t m = 0; m < masks; ++m) {
            prob[b * masks + m] = Sigmoid(margin[m]);
          }
        },
        threads);
    // Same shifted mean as CoalitionEvaluator.
    for (size_t m = 0; m < masks; ++m) {
      const double first = prob[m];
      double offset = 0.0;
      for (size_t b = 1; b < rows; ++b) offset += prob[b * masks + m] - first;
      value[m] = first + offset / static_cast<double>(rows);
    }
  }

 private:
  void Walk(const RegressionTree& tree, std::span<const double> bg, int node,
            Coalition in, Coalition out, std::vector<double>& margin) const {
    const TreeNode& n = tree.nodes()[static_cast<size_t>(node)];
    if (n.feature < 0) {
      const double step = model_.config().learning_rate * n.value;
      const Coalition free = full_ & ~(in | out);
      Coalition sub = free;
      while (true) {
        margin[in | sub] += step;
        if (sub == 0) break;
        sub = (sub - 1) & free;
      }
      return;
    }
    const size_t f = static_cast<size_t>(n.feature);
    const int x_child = x_[f] <= n.threshold ? n.left : n.right;
    const int b_child = bg[f] <= n.threshold ? n.left : n.right;
    if (x_child == b_child) {
      Walk(tree, bg, x_child, in, out, margin);
      return;
    }
    const Coalition bit = owner_[f];
    if (!(out & bit)) Walk(tree, bg, x_child, in | bit, out, margin);
    if (!(in & bit)) Walk(tree, bg, b_child, in, out | bit, margin);
  }

  const GbtModel& model_;
  std::span<const double> x_;
  const BackgroundSet& background_;
  std::vector<Coalition> owner_;
  Coalition full_ = 0;
};

}  // namespace

FeatureGrouping::FeatureGrouping(std::vector<FeatureGroup> groups,
                                 size_t num_columns)
    : groups_(std::move(groups)), num_columns_(num_columns) {
  std::vector<int> owner(num_columns, -1);
  for (size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].columns.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature group " + groups_[g].name + " has no columns");
    }
    for (size_t c : groups_[g].columns) {
      if (c >= num_columns || owner[c] != -1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "feature groups must partition the columns exactly");
      }
      owner[c] = static_cast<int>(g);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature groups do not cover every column");
  }
}

FeatureGrouping FeatureGrouping::FromEncoding(const FeatureEncoding& encoding) {
  std::vector<FeatureGroup> groups;
  for (const FeatureSpec& f : encoding.features()) {
    FeatureGroup group{f.name, {}};
    for (size_t c = 0; c < f.width; ++c) group.columns.push_back(f.offset + c);
    groups.push_back(std::move(group));
  }
  return FeatureGrouping(std::move(groups), encoding.num_columns());
}

FeatureGrouping FeatureGrouping::Singletons(size_t num_columns) {
  std::vector<FeatureGroup> groups;
  for (size_t c = 0; c < num_columns; ++c) {
    groups.push_back({"x" + std::to_string(c), {c}});
  }
  return FeatureGrouping(std::move(groups), num_columns);
}

std::vector<std::string> FeatureGrouping::names() const {
  std::vector<std::string> out;
  for (const FeatureGroup& g : groups_) out.push_back(g.name);
  return out;
}

BackgroundSet SampleBackground(const EncodedDataset& data,
                               std::span<const size_t> pool, size_t size,
                               uint64_t seed) {
  std::vector<size_t> candidates(pool.begin(), pool.end());
  if (candidates.empty()) {
    candidates.resize(data.size());
    std::iota(candidates.begin(), candidates.end(), size_t{0});
  }
  const size_t take = std::min(size, candidates.size());
  if (take == 0) throw Error(ErrorCode::kEmptyInput, "empty background pool");
  std::mt19937_64 rng(seed);
  for (size_t k = 0; k < take; ++k) {
    const size_t j = k + static_cast<size_t>(rng() % (candidates.size() - k));
    std::swap(candidates[k], candidates[j]);
  }
  candidates.resize(take);
  std::sort(candidates.begin(), candidates.end());
  return BackgroundSet{data.features.SelectRows(candidates), seed};
}

double ValueFunction(const Predictor& model, std::span<const double> x,
                     Coalition coalition, const BackgroundSet& background,
                     const FeatureGrouping& grouping) {
  CheckWidths(model, x, background, grouping);
  const size_t p = grouping.size();
  if (p < 64 && (coalition >> p) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "coalition outside grouping");
  }
  CoalitionEvaluator eval(model, x, background, grouping);
  return eval(coalition);
}

double Attribution::Reconstruction() const {
  double total = phi0;
  for (double v : phi) total += v;
  return total;
}

Attribution ExactShap(const Predictor& model, std::span<const double> x,
                      const BackgroundSet& background,
                      const FeatureGrouping& grouping, int threads) {
  CheckWidths(model, x, background, grouping);
  const size_t p = grouping.size();
  if (p > kMaxExactFeatures) {
    throw Error(ErrorCode::kTooManyFeatures,
                std::to_string(p) + " players exceed the exact limit of " +
                    std::to_string(kMaxExactFeatures));
  }
  const size_t masks = size_t{1} << p;
  std::vector<double> value(masks);
  const auto* gbt = dynamic_cast<const GbtModel*>(&model);
  if (gbt != nullptr && masks * background.size() <= kMaxTreeTableEntries) {
    TreeCoalitionTable(*gbt, x, background, grouping).Fill(value, threads);
    value[masks - 1] = model.Predict(x);
  } else {
    // One evaluator per chunk of masks keeps buffers thread-local.
    const size_t chunks = std::min<size_t>(masks, 64);
    ParallelFor(
        chunks,
        [&](size_t chunk) {
          CoalitionEvaluator eval(model, x, background, grouping);
          const size_t begin = masks * chunk / chunks;
          const size_t end = masks * (chunk + 1) / chunks;
          for (size_t m = begin; m < end; ++m) value[m] = eval(m);
        },
        threads);
  }

  // weight[s] = s! (p - s - 1)! / p! = 1 / (p * C(p - 1, s)).
  std::vector<double> weight(p);
  for (size_t s = 0; s < p; ++s) {
    double binom = 1.0;
    for (size_t k = 1; k <= s; ++k) {
      binom = binom * static_cast<double>(p - k) / static_cast<double>(k);
    }
    weight[s] = 1.0 / (static_cast<double>(p) * binom);
  }

  Attribution out;
  out.method = ShapMethod::kExact;
  out.features = grouping.names();
  out.phi0 = value[0];
  out.prediction = value[masks - 1];
  out.phi.assign(p, 0.0);
  for (size_t j = 0; j < p; ++j) {
    const size_t bit = size_t{1} << j;
    double phi = 0.0;
    for (size_t m = 0; m < masks; ++m) {
      if (m & bit) continue;
      phi += weight[static_cast<size_t>(std::popcount(m))] *
             (value[m | bit] - value[m]);
    }
    out.phi[j] = phi;
  }
  return out;
}

Attribution SampledShap(const Predictor& model, std::span<const double> x,
                        const BackgroundSet& background,
                        const FeatureGrouping& grouping, int n_perm,
                        uint64_t seed) {
  CheckWidths(model, x, background, grouping);
  if (n_perm < 1) throw Error(ErrorCode::kInvalidArgument, "n_perm must be >= 1");
  const size_t p = grouping.size();
  if (p > 64) {
    throw Error(ErrorCode::kTooManyFeatures, "at most 64 players supported");
  }

  CoalitionEvaluator eval(model, x, background, grouping);
  std::unordered_map<Coalition, double> cache;
  auto value = [&](Coalition c) {
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
    const double v = eval(c);
    cache.emplace(c, v);
    return v;
  };

  std::vector<double> sum(p, 0.0);
  std::vector<double> sum_sq(p, 0.0);
  std::vector<size_t> order(p);
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  const double empty_value = value(0);
  for (int t = 0; t < n_perm; ++t) {
    for (size_t i = p; i > 1; --i) {
      const size_t j = static_cast<size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    Coalition coalition = 0;
    double previous = empty_value;
    for (size_t g : order) {
      coalition |= Coalition{1} << g;
      const double current = value(coalition);
      const double contribution = current - previous;
      sum[g] += contribution;
      sum_sq[g] += contribution * contribution;
      previous = current;
    }
  }

  Attribution out;
  out.method = ShapMethod::kSampled;
  out.features = grouping.names();
  out.phi0 = empty_value;
  out.prediction = model.Predict(x);
  out.n_perm = n_perm;
  out.phi.resize(p);
  out.se.resize(p);
  const double n = static_cast<double>(n_perm);
  for (size_t g = 0; g < p; ++g) {
    out.phi[g] = sum[g] / n;
    if (n_perm > 1) {
      const double var =
          std::max(0.0, (sum_sq[g] - sum[g] * sum[g] / n) / (n - 1.0));
      out.se[g] = std::sqrt(var / n);
    } else {
      out.se[g] = 0.0;
    }
  }
  return out;
}

Attribution Explain(const Predictor& model, std::span<const double> x,
                    const BackgroundSet& background,
                    const FeatureGrouping& grouping,
                    const ShapOptions& options) {
  const ShapMethod method =
      options.method.value_or(grouping.size() <= kDefaultExactLimit
                                  ? ShapMethod::kExact
                                  : ShapMethod::kSampled);
  if (method == ShapMethod::kExact) {
    return ExactShap(model, x, background, grouping, /*threads=*/1);
  }
  return SampledShap(model, x, background, grouping, options.n_perm,
                     options.seed);
}

std::vector<Attribution> ExplainRows(const Predictor& model,
                                     const EncodedDataset& data,
                                     std::span<const size_t> rows,
                                     const BackgroundSet& background,
                                     const FeatureGrouping& grouping,
                                     const ShapOptions& options,
                                     int threads) {
  std::vector<Attribution> out(rows.size());
  ParallelFor(
      rows.size(),
      [&](size_t i) {
        ShapOptions row_options = options;
        row_options.seed = SplitMix64(options.seed ^ SplitMix64(rows[i]));
        out[i] = Explain(model, data.row(rows[i]), background, grouping,
                         row_options);
        out[i].observation_id =
            data.events[rows[i]].match_id + "#" + std::to_string(rows[i]);
      },
      threads);
  return out;
}

std::string_view ToString(ShapMethod method) {
  return method == ShapMethod::kExact ? "exact" : "sampled";
}

nlohmann::json ToJson(const Attribution& a) {
  nlohmann::json phi = nlohmann::json::object();
  for (size_t j = 0; j < a.features.size(); ++j) phi[a.features[j]] = a.phi[j];
  nlohmann::json j = {{"observation_id", a.observation_id},
                      {"phi0", a.phi0},
                      {"phi", phi},
                      {"prediction", a.prediction},
                      {"method", ToString(a.method)}};
  if (a.method == ShapMethod::kSampled) {
    j["n_perm"] = a.n_perm;
    nlohmann::json se = nlohmann::json::object();
    for (size_t k = 0; k < a.features.size(); ++k) se[a.features[k]] = a.se[k];
    j["se"] = se;
  }
  return j;
}

}  // namespace xgx
