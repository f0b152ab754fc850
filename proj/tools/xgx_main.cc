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

// xgx: command-line driver for training, explanation and the analysis
// workflows. Machine-readable output goes to stdout, diagnostics to stderr.
//
// Exit codes: 0 ok, 2 data error, 3 training error, 4 empty selection,
// 5 configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xgx/analysis.h"
#include "xgx/event_data.h"
#include "xgx/glocal.h"
#include "xgx/metrics.h"
#include "xgx/parallel.h"
#include "xgx/shapley.h"
#include "xgx/status.h"
#include "xgx/xg_model.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitTrain = 3;
constexpr int kExitEmpty = 4;
constexpr int kExitConfig = 5;

int ExitCodeFor(xgx::ErrorCode code) {
  using xgx::ErrorCode;
  switch (code) {
    case ErrorCode::kMissingColumn:
    case ErrorCode::kBadValue:
    case ErrorCode::kEmptyFile:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kUnknownLevel:
    case ErrorCode::kIo:
      return kExitData;
    case ErrorCode::kSingleClassData:
    case ErrorCode::kNonConvergence:
      return kExitTrain;
    case ErrorCode::kEmptyGroup:
      return kExitEmpty;
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kTooManyFeatures:
    case ErrorCode::kMixedBaselines:
    case ErrorCode::kUnknownFeature:
    case ErrorCode::kInvalidArgument:
      return kExitConfig;
  }
  return kExitConfig;
}

struct RunConfig {
  std::string data_path;
  std::string model_path;
  std::string out_path;
  std::string out_dir = ".";
  uint64_t seed = 42;
  std::string method = "auto";
  int n_perm = xgx::kDefaultPermutations;
  size_t background = xgx::kDefaultBackgroundSize;
  std::string mode = "mean";
  int grid_points = xgx::kDefaultGridPoints;
  std::vector<std::string> select;
  int threads = 0;

  // train
  std::string model_type = "gbt";
  xgx::GbtConfig gbt;
  double lambda = 1.0;
  int rare_threshold = xgx::kDefaultRareThreshold;

  // profile / report
  std::string feature;
  bool pdp = false;
  std::string workflow;
  std::vector<std::string> players;
  std::vector<std::string> keepers;
  std::vector<std::string> features;
  std::string team;
  std::vector<std::string> seasons;

  // metrics
  std::string group_by;
  bool exclude_penalties = false;
  bool csv = false;
};

[[noreturn]] void ConfigError(const std::string& message) {
  throw xgx::Error(xgx::ErrorCode::kInvalidArgument, message);
}

void RequireReadable(const std::string& path, const char* what) {
  if (path.empty()) ConfigError(std::string("--") + what + " is required");
  std::ifstream in(path);
  if (!in) throw xgx::Error(xgx::ErrorCode::kIo, std::string("cannot read ") + what + " " + path);
}

void RequireWritableDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw xgx::Error(xgx::ErrorCode::kIo, "cannot create output directory " + dir);
  }
}

void RequireWritableFile(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) RequireWritableDir(parent.string());
}

// Writes to --out when given, otherwise stdout.
void Emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  out << text;
  if (!out) throw xgx::Error(xgx::ErrorCode::kIo, "cannot write " + cfg.out_path);
  std::cout << cfg.out_path << '\n';
}

xgx::ShapOptions ShapOptionsFrom(const RunConfig& cfg) {
  xgx::ShapOptions options;
  options.n_perm = cfg.n_perm;
  options.seed = cfg.seed;
  if (cfg.method == "exact") {
    options.method = xgx::ShapMethod::kExact;
  } else if (cfg.method == "sampled") {
    options.method = xgx::ShapMethod::kSampled;
  } else if (cfg.method != "auto") {
    ConfigError("unknown --method " + cfg.method);
  }
  return options;
}

xgx::AggregationMode ModeFrom(const RunConfig& cfg) {
  const auto mode = xgx::ParseAggregationMode(cfg.mode);
  if (!mode) ConfigError("unknown --mode " + cfg.mode);
  return *mode;
}

struct Loaded {
  std::unique_ptr<xgx::Model> model;
  xgx::EncodedDataset data;
};

Loaded LoadModelAndData(const RunConfig& cfg) {
  RequireReadable(cfg.data_path, "data");
  RequireReadable(cfg.model_path, "model");
  Loaded loaded;
  loaded.model = xgx::LoadModel(cfg.model_path);
  const auto events = xgx::ParseCsvFile(cfg.data_path);
  loaded.data = xgx::Encode(events, loaded.model->encoding());
  return loaded;
}

std::string Dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int CmdTrain(const RunConfig& cfg) {
  RequireReadable(cfg.data_path, "data");
  if (cfg.out_path.empty()) ConfigError("--out is required");
  RequireWritableFile(cfg.out_path);
  if (cfg.model_type != "gbt" && cfg.model_type != "logistic") {
    ConfigError("unknown --model-type " + cfg.model_type);
  }

  const auto events = xgx::ParseCsvFile(cfg.data_path);
  const xgx::FeatureEncoding encoding =
      xgx::BuildEncoding(events, cfg.rare_threshold);
  const xgx::EncodedDataset data = xgx::Encode(events, encoding);
  const xgx::SplitIndices split = xgx::SplitByMatch(data);
  const xgx::EncodedDataset train = xgx::Subset(data, split.train);

  std::unique_ptr<xgx::Model> model;
  try {
    if (cfg.model_type == "gbt") {
      xgx::GbtConfig gbt = cfg.gbt;
      gbt.seed = cfg.seed;
      model = std::make_unique<xgx::GbtModel>(xgx::TrainGbt(train, gbt));
    } else {
      xgx::LogisticConfig logistic;
      logistic.lambda = cfg.lambda;
      model = std::make_unique<xgx::LogisticModel>(xgx::TrainLogistic(train, logistic));
    }
  } catch (const xgx::Error& e) {
    // Empty training folds surface as data errors elsewhere; here they are
    // a training failure.
    if (e.code() == xgx::ErrorCode::kEmptyInput) {
      throw xgx::Error(xgx::ErrorCode::kSingleClassData, e.what());
    }
    throw;
  }
  xgx::SaveModel(*model, cfg.out_path);

  nlohmann::json out = {{"model", cfg.out_path},
                        {"model_type", model->model_type()},
                        {"model_fingerprint", xgx::ModelFingerprint(*model)},
                        {"train_rows", split.train.size()},
                        {"test_rows", split.test.size()},
                        {"train", xgx::ToJson(xgx::Evaluate(*model, train))}};
  if (!split.test.empty()) {
    out["test"] = xgx::ToJson(xgx::Evaluate(*model, xgx::Subset(data, split.test)));
  }
  std::cout << Dump(out);
  return kExitOk;
}

int CmdExplain(const RunConfig& cfg) {
  RequireWritableFile(cfg.out_path);
  const xgx::ShapOptions shap = ShapOptionsFrom(cfg);
  const xgx::AggregationMode mode = ModeFrom(cfg);
  const auto selector = xgx::ParseSelector(cfg.select);
  Loaded loaded = LoadModelAndData(cfg);
  const auto rows = xgx::Select(loaded.data, selector);
  if (rows.empty()) {
    throw xgx::Error(xgx::ErrorCode::kEmptyGroup,
                     "selection is empty: " + selector.Describe());
  }
  const auto split = xgx::SplitByMatch(loaded.data);
  const auto background =
      xgx::SampleBackground(loaded.data, split.train, cfg.background, cfg.seed);
  const auto grouping = xgx::FeatureGrouping::FromEncoding(loaded.data.encoding);
  const auto members = xgx::ExplainRows(*loaded.model, loaded.data, rows,
                                        background, grouping, shap);
  nlohmann::json out;
  if (members.size() == 1) {
    out = xgx::ToJson(members.front());
  } else {
    out = xgx::ToJson(xgx::AggregateShap(members, mode, selector.Describe()));
  }
  Emit(cfg, Dump(out));
  return kExitOk;
}

int CmdProfile(const RunConfig& cfg) {
  RequireWritableFile(cfg.out_path);
  if (cfg.feature.empty()) ConfigError("--feature is required");
  const auto selector = xgx::ParseSelector(cfg.select);
  Loaded loaded = LoadModelAndData(cfg);
  if (!loaded.data.encoding.HasFeature(cfg.feature)) {
    throw xgx::Error(xgx::ErrorCode::kUnknownFeature, cfg.feature);
  }
  const xgx::Grid grid = xgx::MakeGrid(loaded.data, cfg.feature, cfg.grid_points);
  xgx::Profile profile;
  if (cfg.pdp) {
    profile = xgx::Pdp(*loaded.model, loaded.data, cfg.feature, grid);
  } else {
    const auto rows = xgx::Select(loaded.data, selector);
    if (rows.empty()) {
      throw xgx::Error(xgx::ErrorCode::kEmptyGroup,
                       "selection is empty: " + selector.Describe());
    }
    if (rows.size() == 1) {
      profile = xgx::CpProfile(*loaded.model, loaded.data.encoding,
                               loaded.data.row(rows.front()), cfg.feature, grid);
    } else {
      profile = xgx::AggregateProfiles(*loaded.model, loaded.data, rows,
                                       cfg.feature, grid);
    }
  }
  Emit(cfg, Dump(xgx::ToJson(profile)));
  return kExitOk;
}

std::vector<xgx::SubjectSpec> SubjectsFor(const std::vector<std::string>& names,
                                          bool by_team,
                                          const xgx::GroupSelector& extra) {
  std::vector<xgx::SubjectSpec> out;
  for (const std::string& name : names) {
    xgx::GroupSelector sel;
    if (by_team) {
      sel.team = name;
    } else {
      sel.player = name;
    }
    out.push_back({name, xgx::Intersect(sel, extra)});
  }
  return out;
}

int CmdReport(const RunConfig& cfg) {
  const auto workflow = xgx::ParseWorkflow(cfg.workflow);
  if (!workflow) {
    throw xgx::Error(xgx::ErrorCode::kInvalidArgument,
                     "unknown workflow " + cfg.workflow);
  }
  RequireWritableDir(cfg.out_dir);
  xgx::AnalysisConfig analysis;
  analysis.grid_points = cfg.grid_points;
  analysis.background_size = cfg.background;
  analysis.seed = cfg.seed;
  analysis.shap = ShapOptionsFrom(cfg);
  analysis.mode = ModeFrom(cfg);
  const auto extra = xgx::ParseSelector(cfg.select);

  std::vector<std::string> features = cfg.features;
  if (features.empty()) {
    if (*workflow == xgx::Workflow::kScoringPotential) features = xgx::kScoringDefaultFeatures;
    if (*workflow == xgx::Workflow::kGoalkeeperBlindspot) features = xgx::kBlindspotDefaultFeatures;
  }
  switch (*workflow) {
    case xgx::Workflow::kScoringPotential:
      if (cfg.players.empty()) ConfigError("--players is required");
      break;
    case xgx::Workflow::kGoalkeeperBlindspot:
      if (cfg.keepers.empty()) ConfigError("--keepers is required");
      break;
    case xgx::Workflow::kSeasonComparison:
      if (cfg.team.empty()) ConfigError("--team is required");
      if (cfg.seasons.size() != 2) ConfigError("--seasons takes exactly two seasons");
      break;
  }

  Loaded loaded = LoadModelAndData(cfg);
  for (const std::string& f : features) {
    if (!loaded.data.encoding.HasFeature(f)) {
      throw xgx::Error(xgx::ErrorCode::kUnknownFeature, f);
    }
  }

  xgx::AnalysisReport report;
  switch (*workflow) {
    case xgx::Workflow::kScoringPotential: {
      const auto players = SubjectsFor(cfg.players, false, extra);
      report = xgx::ScoringPotential(*loaded.model, loaded.data, players, features, analysis);
      break;
    }
    case xgx::Workflow::kGoalkeeperBlindspot: {
      const auto keepers = SubjectsFor(cfg.keepers, true, extra);
      report = xgx::GoalkeeperBlindspot(*loaded.model, loaded.data, keepers, features, analysis);
      break;
    }
    case xgx::Workflow::kSeasonComparison:
      report = xgx::SeasonComparison(*loaded.model, loaded.data, cfg.team,
                                     {cfg.seasons[0], cfg.seasons[1]}, analysis);
      break;
  }
  for (const auto& s : report.subjects) {
    if (!s.warning.empty()) std::cerr << "warning: " << s.label << ": " << s.warning << '\n';
  }

  const std::string json_path =
      (std::filesystem::path(cfg.out_dir) / (std::string(xgx::ToString(*workflow)) + ".json"))
          .string();
  {
    std::ofstream out(json_path, std::ios::binary);
    out << Dump(xgx::ToJson(report));
    if (!out) throw xgx::Error(xgx::ErrorCode::kIo, "cannot write " + json_path);
  }
  std::cout << json_path << '\n';
  for (const std::string& path : xgx::RenderSvg(report, cfg.out_dir)) {
    std::cout << path << '\n';
  }
  return kExitOk;
}

int CmdMetrics(const RunConfig& cfg) {
  RequireWritableFile(cfg.out_path);
  if (!cfg.group_by.empty() && cfg.group_by != "team" && cfg.group_by != "player") {
    ConfigError("--group-by must be team or player");
  }
  const auto selector = xgx::ParseSelector(cfg.select);
  Loaded loaded = LoadModelAndData(cfg);
  xgx::MetricOptions options;
  options.exclude_penalties = cfg.exclude_penalties;

  std::vector<xgx::MetricReport> reports;
  if (cfg.group_by.empty()) {
    reports.push_back(xgx::ComputeMetrics(*loaded.model, loaded.data, selector, options));
  } else {
    std::map<std::string, int> keys;
    for (size_t r : xgx::Select(loaded.data, selector)) {
      const auto& e = loaded.data.events[r];
      keys[cfg.group_by == "team" ? e.team : e.player] = 1;
    }
    if (keys.empty()) {
      throw xgx::Error(xgx::ErrorCode::kEmptyGroup,
                       "selection is empty: " + selector.Describe());
    }
    for (const auto& [key, unused] : keys) {
      xgx::GroupSelector sel = selector;
      if (cfg.group_by == "team") {
        sel.team = key;
      } else {
        sel.player = key;
      }
      reports.push_back(xgx::ComputeMetrics(*loaded.model, loaded.data, sel, options));
    }
  }
  if (cfg.csv) {
    std::ostringstream out;
    xgx::WriteMetricsCsv(out, reports);
    Emit(cfg, out.str());
  } else if (reports.size() == 1) {
    Emit(cfg, Dump(xgx::ToJson(reports.front())));
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(xgx::ToJson(r));
    Emit(cfg, Dump(arr));
  }
  return kExitOk;
}

void AddShared(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--data", cfg.data_path, "Shot CSV");
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads (also XGX_THREADS)");
}

void AddSelection(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--model", cfg.model_path, "Model JSON");
  cmd->add_option("--select", cfg.select, "key=value filter (repeatable)");
}

void AddShapOptions(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--method", cfg.method, "auto, exact or sampled")->capture_default_str();
  cmd->add_option("--n-perm", cfg.n_perm, "Permutations for sampled SHAP")->capture_default_str();
  cmd->add_option("--background", cfg.background, "Background rows")->capture_default_str();
  cmd->add_option("--mode", cfg.mode, "Aggregation: mean or sum")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Glocal explanations for expected-goal models"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* train = app.add_subcommand("train", "Train a model and print its evaluation");
  AddShared(train, cfg);
  train->add_option("--out", cfg.out_path, "Model output path");
  train->add_option("--model-type", cfg.model_type, "gbt or logistic")->capture_default_str();
  train->add_option("--trees", cfg.gbt.trees)->capture_default_str();
  train->add_option("--depth", cfg.gbt.depth)->capture_default_str();
  train->add_option("--learning-rate", cfg.gbt.learning_rate)->capture_default_str();
  train->add_option("--min-leaf", cfg.gbt.min_leaf)->capture_default_str();
  train->add_option("--lambda", cfg.lambda, "Logistic L2 penalty")->capture_default_str();
  train->add_option("--rare-threshold", cfg.rare_threshold)->capture_default_str();

  auto* explain = app.add_subcommand("explain", "SHAP for one shot or aSHAP for a group");
  AddShared(explain, cfg);
  AddSelection(explain, cfg);
  AddShapOptions(explain, cfg);
  explain->add_option("--out", cfg.out_path, "Write JSON here instead of stdout");

  auto* profile = app.add_subcommand("profile", "CP, aggregated or partial dependence profile");
  AddShared(profile, cfg);
  AddSelection(profile, cfg);
  profile->add_option("--feature", cfg.feature, "Feature to profile");
  profile->add_option("--grid", cfg.grid_points, "Continuous grid points")->capture_default_str();
  profile->add_flag("--pdp", cfg.pdp, "Profile every row (partial dependence)");
  profile->add_option("--out", cfg.out_path, "Write JSON here instead of stdout");

  auto* report = app.add_subcommand("report", "Run an analysis workflow");
  AddShared(report, cfg);
  AddSelection(report, cfg);
  AddShapOptions(report, cfg);
  report->add_option("workflow", cfg.workflow,
                     "scoring-potential, goalkeeper-blindspot or season-comparison")
      ->required();
  report->add_option("--out-dir", cfg.out_dir, "Directory for JSON and SVG output")
      ->capture_default_str();
  report->add_option("--players", cfg.players, "Comma-separated players")->delimiter(',');
  report->add_option("--keepers", cfg.keepers, "Comma-separated keeper teams")->delimiter(',');
  report->add_option("--features", cfg.features, "Comma-separated features")->delimiter(',');
  report->add_option("--team", cfg.team, "Team for season comparison");
  report->add_option("--seasons", cfg.seasons, "Two comma-separated seasons")->delimiter(',');
  report->add_option("--grid", cfg.grid_points, "Continuous grid points")->capture_default_str();

  auto* metrics = app.add_subcommand("metrics", "xG, xGOT, xGA and xGAOT for a subject");
  AddShared(metrics, cfg);
  AddSelection(metrics, cfg);
  metrics->add_option("--group-by", cfg.group_by, "team or player");
  metrics->add_flag("--exclude-penalties", cfg.exclude_penalties);
  metrics->add_flag("--csv", cfg.csv, "CSV instead of JSON");
  metrics->add_option("--out", cfg.out_path, "Write output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cfg.threads > 0) xgx::SetDefaultThreads(cfg.threads);
    if (*train) return CmdTrain(cfg);
    if (*explain) return CmdExplain(cfg);
    if (*profile) return CmdProfile(cfg);
    if (*report) return CmdReport(cfg);
    if (*metrics) return CmdMetrics(cfg);
  } catch (const xgx::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
