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

#ifndef XGX_XG_MODEL_H_
#define XGX_XG_MODEL_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xgx/event_data.h"
#include "xgx/matrix.h"

namespace xgx {

// Black-box probability function over encoded rows. Implementations must be
// deterministic and safe to call concurrently.
class Predictor {
 public:
  virtual ~Predictor() = default;

  // Probability in [0, 1]. `row.size()` must equal dim().
  virtual double Predict(std::span<const double> row) const = 0;
  virtual size_t dim() const = 0;
};

// Wraps an arbitrary callable; mostly for constructed test models.
class FunctionPredictor : public Predictor {
 public:
  FunctionPredictor(size_t dim,
                    std::function<double(std::span<const double>)> fn)
      : dim_(dim), fn_(std::move(fn)) {}

  double Predict(std::span<const double> row) const override {
    return fn_(row);
  }
  size_t dim() const override { return dim_; }

 private:
  size_t dim_;
  std::function<double(std::span<const double>)> fn_;
};

// Applies Predict to every row; the output matches a scalar loop bitwise.
// Throws Error(kDimensionMismatch) when the widths disagree.
std::vector<double> PredictBatch(const Predictor& model, const Matrix& rows,
                                 int threads = 0);

inline double Sigmoid(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }

// A trained model that knows how its inputs were encoded.
class Model : public Predictor {
 public:
  virtual std::string model_type() const = 0;
  virtual const FeatureEncoding& encoding() const = 0;
  virtual nlohmann::json ParametersJson() const = 0;
  virtual nlohmann::json ConfigJson() const = 0;
  virtual const std::string& train_fingerprint() const = 0;
};

// ---------------------------------------------------------------------------
// Logistic regression

struct LogisticConfig {
  double lambda = 1.0;  // L2 penalty on the coefficients, not the intercept.
  int max_iterations = 100;
  double tolerance = 1e-8;  // On the largest coefficient change.
};

class LogisticModel : public Model {
 public:
  LogisticModel(FeatureEncoding encoding, double intercept,
                std::vector<double> coefficients, LogisticConfig config,
                std::string train_fingerprint);

  double Predict(std::span<const double> row) const override;
  size_t dim() const override { return coefficients_.size(); }

  std::string model_type() const override { return "logistic"; }
  const FeatureEncoding& encoding() const override { return encoding_; }
  nlohmann::json ParametersJson() const override;
  nlohmann::json ConfigJson() const override;
  const std::string& train_fingerprint() const override {
    return train_fingerprint_;
  }

  double intercept() const { return intercept_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const LogisticConfig& config() const { return config_; }

 private:
  FeatureEncoding encoding_;
  double intercept_;
  std::vector<double> coefficients_;
  LogisticConfig config_;
  std::string train_fingerprint_;
};

// Fits L2-regularized logistic regression with damped Newton iterations.
// Throws Error(kSingleClassData) or Error(kNonConvergence).
LogisticModel TrainLogistic(const EncodedDataset& data,
                            const LogisticConfig& config = {});

// Lower-level entry point on a raw matrix, used by the dataset overload.
LogisticModel TrainLogistic(const Matrix& x, std::span<const double> y,
                            FeatureEncoding encoding,
                            const LogisticConfig& config = {});

// ---------------------------------------------------------------------------
// Gradient boosted trees

// Internal split: rows with x[feature] <= threshold go left.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf.
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // Leaf output in log-odds, before the learning rate.
};

class RegressionTree {
 public:
  RegressionTree() : nodes_(1) {}
  explicit RegressionTree(std::vector<TreeNode> nodes)
      : nodes_(std::move(nodes)) {}

  double Evaluate(std::span<const double> row) const;
  int Depth() const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

struct GbtConfig {
  int trees = 200;
  int depth = 4;
  double learning_rate = 0.1;
  int min_leaf = 20;
  uint64_t seed = 42;
  // Row fraction drawn (without replacement, seeded) for each tree.
  double subsample = 1.0;
  // Added to the hessian sum in the Newton leaf estimate.
  double l2_leaf = 1.0;
  // Candidate thresholds per column.
  int max_bins = 256;
};

class GbtModel : public Model {
 public:
  GbtModel(FeatureEncoding encoding, size_t dim, double base_score,
           std::vector<RegressionTree> trees, GbtConfig config,
           std::string train_fingerprint);

  double Predict(std::span<const double> row) const override;
  size_t dim() const override { return dim_; }

  // Raw log-odds.
  double Margin(std::span<const double> row) const;

  std::string model_type() const override { return "gbt"; }
  const FeatureEncoding& encoding() const override { return encoding_; }
  nlohmann::json ParametersJson() const override;
  nlohmann::json ConfigJson() const override;
  const std::string& train_fingerprint() const override {
    return train_fingerprint_;
  }

  double base_score() const { return base_score_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }
  const GbtConfig& config() const { return config_; }

  // Copy with one more tree appended.
  GbtModel WithTree(RegressionTree tree) const;

 private:
  FeatureEncoding encoding_;
  size_t dim_;
  double base_score_;
  std::vector<RegressionTree> trees_;
  GbtConfig config_;
  std::string train_fingerprint_;
};

// Stagewise boosting on the logistic loss. Throws Error(kSingleClassData),
// Error(kInvalidArgument) for trees < 1 or depth < 0.
GbtModel TrainGbt(const EncodedDataset& data, const GbtConfig& config = {});
GbtModel TrainGbt(const Matrix& x, std::span<const double> y,
                  FeatureEncoding encoding, const GbtConfig& config = {});

// ---------------------------------------------------------------------------
// Evaluation

struct CalibrationBin {
  size_t count = 0;
  double mean_predicted = 0.0;
  double observed_rate = 0.0;
};

struct EvalReport {
  size_t n = 0;
  double log_loss = 0.0;
  double brier = 0.0;
  std::optional<double> auc;  // Absent when only one class is present.
  std::vector<CalibrationBin> calibration;
};

inline constexpr double kProbabilityClip = 1e-12;
inline constexpr int kCalibrationBins = 10;

// Mann-Whitney AUC with tied scores counted as 1/2. nullopt for one class.
std::optional<double> RocAuc(std::span<const double> scores,
                             std::span<const double> labels);

EvalReport EvaluatePredictions(std::span<const double> predictions,
                               std::span<const double> labels);
// Throws Error(kEmptyInput).
EvalReport Evaluate(const Predictor& model, const EncodedDataset& data);

nlohmann::json ToJson(const EvalReport& report);

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json EncodingToJson(const FeatureEncoding& encoding);
FeatureEncoding EncodingFromJson(const nlohmann::json& j);

// {model_type, encoding, parameters, config, train_fingerprint}
nlohmann::json ModelToJson(const Model& model);
std::unique_ptr<Model> ModelFromJson(const nlohmann::json& j);

void SaveModel(const Model& model, const std::string& path);
std::unique_ptr<Model> LoadModel(const std::string& path);

// Fingerprint of the model document.
std::string ModelFingerprint(const Model& model);

}  // namespace xgx

#endif  // XGX_XG_MODEL_H_
