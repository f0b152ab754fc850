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

#include "xgx/xg_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "xgx/fingerprint.h"
#include "xgx/parallel.h"
#include "xgx/status.h"

namespace xgx {
namespace {

void RequireBothClasses(std::span<const double> y) {
  bool has_pos = false;
  bool has_neg = false;
  for (double v : y) {
    if (v > 0.5) {
      has_pos = true;
    } else {
      has_neg = true;
    }
  }
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::kSingleClassData,
                "training labels contain a single class");
  }
}

std::string TrainingFingerprint(const Matrix& x, std::span<const double> y) {
  Fingerprint fp;
  fp.Add(static_cast<uint64_t>(x.rows())).Add(static_cast<uint64_t>(x.cols()));
  fp.Add(std::span<const double>(x.data()));
  fp.Add(y);
  return fp.Hex();
}

// log(1 + exp(m)) without overflow.
double Softplus(double m) {
  return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

}  // namespace

std::vector<double> PredictBatch(const Predictor& model, const Matrix& rows,
                                 int threads) {
  if (rows.rows() > 0 && rows.cols() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "rows have " + std::to_string(rows.cols()) +
                    " columns, model expects " + std::to_string(model.dim()));
  }
  std::vector<double> out(rows.rows());
  ParallelFor(
      rows.rows(), [&](size_t i) { out[i] = model.Predict(rows.row(i)); },
      threads);
  return out;
}

// ---------------------------------------------------------------------------
// Logistic regression

LogisticModel::LogisticModel(FeatureEncoding encoding, double intercept,
                             std::vector<double> coefficients,
                             LogisticConfig config,
                             std::string train_fingerprint)
    : encoding_(std::move(encoding)),
      intercept_(intercept),
      coefficients_(std::move(coefficients)),
      config_(config),
      train_fingerprint_(std::move(train_fingerprint)) {
  for (double b : coefficients_) {
    if (!std::isfinite(b)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite coefficient");
    }
  }
}

double LogisticModel::Predict(std::span<const double> row) const {
  double margin = intercept_;
  for (size_t j = 0; j < coefficients_.size(); ++j) {
    margin += coefficients_[j] * row[j];
  }
  return Sigmoid(margin);
}

nlohmann::json LogisticModel::ParametersJson() const {
  return {{"intercept", intercept_}, {"coefficients", coefficients_}};
}

nlohmann::json LogisticModel::ConfigJson() const {
  return {{"lambda", config_.lambda},
          {"max_iterations", config_.max_iterations},
          {"tolerance", config_.tolerance}};
}

LogisticModel TrainLogistic(const EncodedDataset& data,
                            const LogisticConfig& config) {
  return TrainLogistic(data.features, data.is_goal, data.encoding, config);
}

LogisticModel TrainLogistic(const Matrix& x, std::span<const double> y,
                            FeatureEncoding encoding,
                            const LogisticConfig& config) {
  if (x.rows() == 0) throw Error(ErrorCode::kEmptyInput, "no training rows");
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "label count");
  }
  RequireBothClasses(y);
  const size_t n = x.rows();
  const size_t d = x.cols();

  // Parameter vector: [intercept, coefficients...].
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
  const double prevalence =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  beta[0] = std::log(prevalence / (1.0 - prevalence));

  auto margin_of = [&](const Eigen::VectorXd& b, size_t i) {
    double m = b[0];
    const auto row = x.row(i);
    for (size_t j = 0; j < d; ++j) m += b[static_cast<Eigen::Index>(j + 1)] * row[j];
    return m;
  };
  auto objective = [&](const Eigen::VectorXd& b) {
    double loss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double m = margin_of(b, i);
      loss += Softplus(m) - y[i] * m;
    }
    return loss + 0.5 * config.lambda * b.tail(static_cast<Eigen::Index>(d)).squaredNorm();
  };

  const auto dim = static_cast<Eigen::Index>(d + 1);
  double gradient_norm = 0.0;
  double current = objective(beta);
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd xi(dim);
    for (size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      xi[0] = 1.0;
      for (size_t j = 0; j < d; ++j) xi[static_cast<Eigen::Index>(j + 1)] = row[j];
      const double p = Sigmoid(beta.dot(xi));
      grad.noalias() += (p - y[i]) * xi;
      hess.selfadjointView<Eigen::Lower>().rankUpdate(xi, p * (1.0 - p));
    }
    hess = hess.selfadjointView<Eigen::Lower>();
    for (Eigen::Index j = 1; j < dim; ++j) {
      grad[j] += config.lambda * beta[j];
      hess(j, j) += config.lambda;
    }
    gradient_norm = grad.norm();
    // Tiny ridge keeps the solve defined for an all-zero column with
    // lambda == 0.
    hess.diagonal().array() += 1e-12;
    const Eigen::VectorXd step = hess.ldlt().solve(grad);

    double scale = 1.0;
    Eigen::VectorXd candidate = beta - step;
    double value = objective(candidate);
    while (value > current && scale > 1e-10) {
      scale *= 0.5;
      candidate = beta - scale * step;
      value = objective(candidate);
    }
    const double change = scale * step.cwiseAbs().maxCoeff();
    beta = candidate;
    current = value;
    if (change < config.tolerance) {
      std::vector<double> coefficients(d);
      for (size_t j = 0; j < d; ++j) coefficients[j] = beta[static_cast<Eigen::Index>(j + 1)];
      return LogisticModel(std::move(encoding), beta[0],
                           std::move(coefficients), config,
                           TrainingFingerprint(x, y));
    }
  }
  throw Error(ErrorCode::kNonConvergence,
              "no convergence after " + std::to_string(config.max_iterations) +
                  " iterations; gradient norm " +
                  std::to_string(gradient_norm));
}

// ---------------------------------------------------------------------------
// Gradient boosted trees

double RegressionTree::Evaluate(std::span<const double> row) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    const TreeNode& n = nodes_[node];
    node = row[static_cast<size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes_[node].value;
}

int RegressionTree::Depth() const {
  std::function<int(int)> depth_of = [&](int node) -> int {
    const TreeNode& n = nodes_[node];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth_of(n.left), depth_of(n.right));
  };
  return depth_of(0);
}

GbtModel::GbtModel(FeatureEncoding encoding, size_t dim, double base_score,
                   std::vector<RegressionTree> trees, GbtConfig config,
                   std::string train_fingerprint)
    : encoding_(std::move(encoding)),
      dim_(dim),
      base_score_(base_score),
      trees_(std::move(trees)),
      config_(config),
      train_fingerprint_(std::move(train_fingerprint)) {}

double GbtModel::Margin(std::span<const double> row) const {
  double margin = base_score_;
  for (const RegressionTree& tree : trees_) {
    margin += config_.learning_rate * tree.Evaluate(row);
  }
  return margin;
}

double GbtModel::Predict(std::span<const double> row) const {
  return Sigmoid(Margin(row));
}

GbtModel GbtModel::WithTree(RegressionTree tree) const {
  GbtModel copy = *this;
  copy.trees_.push_back(std::move(tree));
  return copy;
}

nlohmann::json GbtModel::ParametersJson() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const RegressionTree& tree : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes()) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    }
    trees.push_back(std::move(nodes));
  }
  return {{"dim", dim_}, {"base_score", base_score_}, {"trees", trees}};
}

nlohmann::json GbtModel::ConfigJson() const {
  return {{"trees", config_.trees},
          {"depth", config_.depth},
          {"learning_rate", config_.learning_rate},
          {"min_leaf", config_.min_leaf},
          {"seed", config_.seed},
          {"subsample", config_.subsample},
          {"l2_leaf", config_.l2_leaf},
          {"max_bins", config_.max_bins}};
}

namespace {

// Per-column candidate thresholds and the bin index of every row.
struct BinnedColumns {
  std::vector<std::vector<double>> cuts;      // cuts[c] ascending
  std::vector<std::vector<uint16_t>> bins;    // bins[c][row]
};

BinnedColumns BinColumns(const Matrix& x, int max_bins) {
  const size_t n = x.rows();
  BinnedColumns out;
  out.cuts.resize(x.cols());
  out.bins.resize(x.cols());
  std::vector<double> column(n);
  for (size_t c = 0; c < x.cols(); ++c) {
    for (size_t i = 0; i < n; ++i) column[i] = x(i, c);
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> unique = sorted;
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    std::vector<double>& cuts = out.cuts[c];
    if (unique.size() <= static_cast<size_t>(max_bins)) {
      cuts = std::move(unique);
    } else {
      for (int k = 1; k <= max_bins; ++k) {
        const size_t pos = static_cast<size_t>(k) * n / static_cast<size_t>(max_bins) - 1;
        if (cuts.empty() || sorted[pos] > cuts.back()) cuts.push_back(sorted[pos]);
      }
    }
    auto& bins = out.bins[c];
    bins.resize(n);
    for (size_t i = 0; i < n; ++i) {
      bins[i] = static_cast<uint16_t>(
          std::lower_bound(cuts.begin(), cuts.end(), column[i]) - cuts.begin());
    }
  }
  return out;
}

class TreeBuilder {
 public:
  TreeBuilder(const BinnedColumns& binned, std::span<const double> residual,
              std::span<const double> hessian, const GbtConfig& config)
      : binned_(binned),
        residual_(residual),
        hessian_(hessian),
        config_(config),
        min_leaf_(static_cast<size_t>(std::max(1, config.min_leaf))) {}

  RegressionTree Build(std::vector<size_t> rows) {
    nodes_.clear();
    Grow(std::move(rows), 0);
    return RegressionTree(std::move(nodes_));
  }

 private:
  int Grow(std::vector<size_t> rows, int level) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double sum_r = 0.0;
    double sum_h = 0.0;
    for (size_t r : rows) {
      sum_r += residual_[r];
      sum_h += hessian_[r];
    }
    nodes_[id].value = sum_r / (sum_h + config_.l2_leaf);
    if (level >= config_.depth || rows.size() < 2 * min_leaf_) return id;

    int best_col = -1;
    size_t best_bin = 0;
    double best_gain = 1e-12;
    const double n = static_cast<double>(rows.size());
    const double parent = sum_r * sum_r / n;
    std::vector<double> hist_sum;
    std::vector<size_t> hist_count;
    for (size_t c = 0; c < binned_.cuts.size(); ++c) {
      const size_t nb = binned_.cuts[c].size();
      if (nb < 2) continue;
      hist_sum.assign(nb, 0.0);
      hist_count.assign(nb, 0);
      const auto& bins = binned_.bins[c];
      for (size_t r : rows) {
        hist_sum[bins[r]] += residual_[r];
        ++hist_count[bins[r]];
      }
      double left_sum = 0.0;
      size_t left_n = 0;
      for (size_t b = 0; b + 1 < nb; ++b) {
        left_sum += hist_sum[b];
        left_n += hist_count[b];
        if (left_n < min_leaf_) continue;
        const size_t right_n = rows.size() - left_n;
        if (right_n < min_leaf_) break;
        const double right_sum = sum_r - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(left_n) +
                            right_sum * right_sum / static_cast<double>(right_n) -
                            parent;
        if (gain > best_gain) {
          best_gain = gain;
          best_col = static_cast<int>(c);
          best_bin = b;
        }
      }
    }
    if (best_col < 0) return id;

    std::vector<size_t> left;
    std::vector<size_t> right;
    const auto& bins = binned_.bins[static_cast<size_t>(best_col)];
    for (size_t r : rows) {
      (bins[r] <= best_bin ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[id].feature = best_col;
    nodes_[id].threshold = binned_.cuts[static_cast<size_t>(best_col)][best_bin];
    const int l = Grow(std::move(left), level + 1);
    const int r = Grow(std::move(right), level + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  const BinnedColumns& binned_;
  std::span<const double> residual_;
  std::span<const double> hessian_;
  const GbtConfig& config_;
  size_t min_leaf_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

GbtModel TrainGbt(const EncodedDataset& data, const GbtConfig& config) {
  return TrainGbt(data.features, data.is_goal, data.encoding, config);
}

GbtModel TrainGbt(const Matrix& x, std::span<const double> y,
                  FeatureEncoding encoding, const GbtConfig& config) {
  if (config.trees < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trees must be >= 1");
  }
  if (config.depth < 0) {
    throw Error(ErrorCode::kInvalidArgument, "depth must be >= 0");
  }
  if (config.max_bins < 2 || config.max_bins > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "max_bins must be in [2, 65535]");
  }
  if (!(config.subsample > 0.0 && config.subsample <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "subsample must be in (0, 1]");
  }
  if (x.rows() == 0) throw Error(ErrorCode::kEmptyInput, "no training rows");
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "label count");
  }
  RequireBothClasses(y);

  const size_t n = x.rows();
  const double prevalence =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  const double base = std::log(prevalence / (1.0 - prevalence));

  const BinnedColumns binned = BinColumns(x, config.max_bins);
  std::vector<double> margin(n, base);
  std::vector<double> residual(n);
  std::vector<double> hessian(n);
  std::vector<size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), size_t{0});
  const size_t sample_size = std::max<size_t>(
      1, static_cast<size_t>(std::floor(config.subsample * static_cast<double>(n))));
  std::mt19937_64 rng(config.seed);

  TreeBuilder builder(binned, residual, hessian, config);
  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<size_t>(config.trees));
  for (int t = 0; t < config.trees; ++t) {
    for (size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      residual[i] = y[i] - p;
      hessian[i] = p * (1.0 - p);
    }
    std::vector<size_t> rows;
    if (sample_size < n) {
      std::vector<size_t> pool = all_rows;
      for (size_t k = 0; k < sample_size; ++k) {
        const size_t j = k + static_cast<size_t>(rng() % (n - k));
        std::swap(pool[k], pool[j]);
      }
      rows.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(sample_size));
      std::sort(rows.begin(), rows.end());
    } else {
      rows = all_rows;
    }
    RegressionTree tree = builder.Build(std::move(rows));
    for (size_t i = 0; i < n; ++i) {
      margin[i] += config.learning_rate * tree.Evaluate(x.row(i));
    }
    trees.push_back(std::move(tree));
  }
  return GbtModel(std::move(encoding), x.cols(), base, std::move(trees), config,
                  TrainingFingerprint(x, y));
}

// ---------------------------------------------------------------------------
// Evaluation

std::optional<double> RocAuc(std::span<const double> scores,
                             std::span<const double> labels) {
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positives = 0.0;
  double rank_sum = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1..j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0.5) {
        positives += 1.0;
        rank_sum += avg_rank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) return std::nullopt;
  return (rank_sum - positives * (positives + 1.0) / 2.0) /
         (positives * negatives);
}

EvalReport EvaluatePredictions(std::span<const double> predictions,
                               std::span<const double> labels) {
  if (predictions.empty()) {
    throw Error(ErrorCode::kEmptyInput, "nothing to evaluate");
  }
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "label count");
  }
  const size_t n = predictions.size();
  EvalReport report;
  report.n = n;
  for (size_t i = 0; i < n; ++i) {
    const double p =
        std::clamp(predictions[i], kProbabilityClip, 1.0 - kProbabilityClip);
    report.log_loss -= labels[i] * std::log(p) + (1.0 - labels[i]) * std::log1p(-p);
    const double err = predictions[i] - labels[i];
    report.brier += err * err;
  }
  report.log_loss /= static_cast<double>(n);
  report.brier /= static_cast<double>(n);
  report.auc = RocAuc(predictions, labels);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return predictions[a] < predictions[b];
  });
  for (int b = 0; b < kCalibrationBins; ++b) {
    const size_t begin = n * static_cast<size_t>(b) / kCalibrationBins;
    const size_t end = n * static_cast<size_t>(b + 1) / kCalibrationBins;
    CalibrationBin bin;
    bin.count = end - begin;
    for (size_t k = begin; k < end; ++k) {
      bin.mean_predicted += predictions[order[k]];
      bin.observed_rate += labels[order[k]];
    }
    if (bin.count > 0) {
      bin.mean_predicted /= static_cast<double>(bin.count);
      bin.observed_rate /= static_cast<double>(bin.count);
    }
    report.calibration.push_back(bin);
  }
  return report;
}

EvalReport Evaluate(const Predictor& model, const EncodedDataset& data) {
  if (data.size() == 0) throw Error(ErrorCode::kEmptyInput, "empty dataset");
  return EvaluatePredictions(PredictBatch(model, data.features), data.is_goal);
}

nlohmann::json ToJson(const EvalReport& report) {
  nlohmann::json bins = nlohmann::json::array();
  for (const CalibrationBin& b : report.calibration) {
    bins.push_back({{"count", b.count},
                    {"mean_predicted", b.mean_predicted},
                    {"observed_rate", b.observed_rate}});
  }
  nlohmann::json j = {{"n", report.n},
                      {"log_loss", report.log_loss},
                      {"brier", report.brier},
                      {"calibration", bins}};
  if (report.auc) j["auc"] = *report.auc;
  return j;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json EncodingToJson(const FeatureEncoding& encoding) {
  nlohmann::json features = nlohmann::json::array();
  for (const FeatureSpec& f : encoding.features()) {
    nlohmann::json jf = {
        {"name", f.name},
        {"kind", f.kind == FeatureKind::kContinuous ? "continuous"
                                                    : "categorical"}};
    if (f.kind == FeatureKind::kCategorical) jf["levels"] = f.levels;
    features.push_back(std::move(jf));
  }
  return {{"rare_threshold", encoding.rare_threshold()},
          {"features", features}};
}

FeatureEncoding EncodingFromJson(const nlohmann::json& j) {
  std::vector<FeatureSpec> specs;
  for (const auto& jf : j.at("features")) {
    FeatureSpec spec;
    spec.name = jf.at("name").get<std::string>();
    const std::string kind = jf.at("kind").get<std::string>();
    if (kind == "continuous") {
      spec.kind = FeatureKind::kContinuous;
    } else if (kind == "categorical") {
      spec.kind = FeatureKind::kCategorical;
      spec.levels = jf.at("levels").get<std::vector<std::string>>();
    } else {
      throw Error(ErrorCode::kInvalidArgument, "feature kind " + kind);
    }
    specs.push_back(std::move(spec));
  }
  return FeatureEncoding(std::move(specs), j.at("rare_threshold").get<int>());
}

nlohmann::json ModelToJson(const Model& model) {
  return {{"model_type", model.model_type()},
          {"encoding", EncodingToJson(model.encoding())},
          {"parameters", model.ParametersJson()},
          {"config", model.ConfigJson()},
          {"train_fingerprint", model.train_fingerprint()}};
}

std::unique_ptr<Model> ModelFromJson(const nlohmann::json& j) {
  try {
    const std::string type = j.at("model_type").get<std::string>();
    FeatureEncoding encoding = EncodingFromJson(j.at("encoding"));
    const nlohmann::json& params = j.at("parameters");
    const nlohmann::json& cfg = j.at("config");
    const std::string fingerprint = j.at("train_fingerprint").get<std::string>();
    if (type == "logistic") {
      LogisticConfig config;
      config.lambda = cfg.at("lambda").get<double>();
      config.max_iterations = cfg.at("max_iterations").get<int>();
      config.tolerance = cfg.at("tolerance").get<double>();
      auto coefficients = params.at("coefficients").get<std::vector<double>>();
      if (coefficients.size() != encoding.num_columns()) {
        throw Error(ErrorCode::kDimensionMismatch, "coefficient count");
      }
      return std::make_unique<LogisticModel>(
          std::move(encoding), params.at("intercept").get<double>(),
          std::move(coefficients), config, fingerprint);
    }
    if (type == "gbt") {
      GbtConfig config;
      config.trees = cfg.at("trees").get<int>();
      config.depth = cfg.at("depth").get<int>();
      config.learning_rate = cfg.at("learning_rate").get<double>();
      config.min_leaf = cfg.at("min_leaf").get<int>();
      config.seed = cfg.at("seed").get<uint64_t>();
      config.subsample = cfg.at("subsample").get<double>();
      config.l2_leaf = cfg.at("l2_leaf").get<double>();
      config.max_bins = cfg.at("max_bins").get<int>();
      const size_t dim = params.at("dim").get<size_t>();
      std::vector<RegressionTree> trees;
      for (const auto& jt : params.at("trees")) {
        std::vector<TreeNode> nodes;
        for (const auto& jn : jt) {
          TreeNode node;
          node.feature = jn.at(0).get<int>();
          node.threshold = jn.at(1).get<double>();
          node.left = jn.at(2).get<int>();
          node.right = jn.at(3).get<int>();
          node.value = jn.at(4).get<double>();
          const int count = static_cast<int>(jt.size());
          if (node.feature >= static_cast<int>(dim) ||
              (node.feature >= 0 &&
               (node.left <= 0 || node.left >= count || node.right <= 0 ||
                node.right >= count))) {
            throw Error(ErrorCode::kInvalidArgument, "malformed tree node");
          }
          nodes.push_back(node);
        }
        if (nodes.empty()) {
          throw Error(ErrorCode::kInvalidArgument, "empty tree");
        }
        trees.emplace_back(std::move(nodes));
      }
      return std::make_unique<GbtModel>(std::move(encoding), dim,
                                        params.at("base_score").get<double>(),
                                        std::move(trees), config, fingerprint);
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown model_type " + type);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed model document: ") + e.what());
  }
}

void SaveModel(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << ModelToJson(model).dump() << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

std::unique_ptr<Model> LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                "model file " + path + " is not valid JSON: " + e.what());
  }
  return ModelFromJson(j);
}

std::string ModelFingerprint(const Model& model) {
  return Fingerprint().Add(ModelToJson(model).dump()).Hex();
}

}  // namespace xgx
