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

#include "xgx/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xgx/status.h"

namespace xgx {
namespace {

std::string ModelFingerprintOf(const Predictor& model) {
  if (const auto* m = dynamic_cast<const Model*>(&model)) {
    return ModelFingerprint(*m);
  }
  return "external";
}

nlohmann::json CreatedFrom(const Predictor& model, const EncodedDataset& data,
                           const AnalysisConfig& config) {
  return {{"model_fingerprint", ModelFingerprintOf(model)},
          {"dataset_fingerprint", data.Fingerprint()},
          {"config", config.ToJson()}};
}

std::vector<Subject> ResolveSubjects(const EncodedDataset& data,
                                     std::span<const SubjectSpec> specs) {
  std::vector<Subject> subjects;
  for (const SubjectSpec& spec : specs) {
    Subject s{spec.label, spec.selector, Select(data, spec.selector), {}};
    if (s.rows.empty()) {
      s.warning = "EmptyGroup: no shots match " + spec.selector.Describe();
    }
    subjects.push_back(std::move(s));
  }
  const bool any = std::any_of(subjects.begin(), subjects.end(),
                               [](const Subject& s) { return !s.skipped(); });
  if (!any) throw Error(ErrorCode::kEmptyGroup, "no subject has any shots");
  return subjects;
}

// Competition ranking: 1 + number of subjects strictly better.
std::vector<std::vector<int>> RankSubjects(
    const std::vector<std::optional<Profile>>& profiles, size_t points,
    bool higher_is_better) {
  std::vector<std::vector<int>> ranks(profiles.size());
  for (size_t s = 0; s < profiles.size(); ++s) {
    if (!profiles[s]) continue;
    ranks[s].resize(points);
    for (size_t z = 0; z < points; ++z) {
      const double mine = profiles[s]->values[z];
      int better = 0;
      for (const auto& other : profiles) {
        if (!other) continue;
        const double theirs = other->values[z];
        if (higher_is_better ? theirs > mine : theirs < mine) ++better;
      }
      ranks[s][z] = 1 + better;
    }
  }
  return ranks;
}

FeatureComparison CompareOnFeature(const Predictor& model,
                                   const EncodedDataset& data,
                                   const std::vector<Subject>& subjects,
                                   const std::string& feature,
                                   const AnalysisConfig& config,
                                   bool higher_is_better) {
  FeatureComparison fc;
  fc.feature = feature;
  fc.grid = MakeGrid(data, feature, config.grid_points);
  const FeatureSpec& spec = data.encoding.Feature(feature);
  double pooled_sum = 0.0;
  size_t pooled_n = 0;
  for (const Subject& s : subjects) {
    if (s.skipped()) {
      fc.profiles.emplace_back();
      continue;
    }
    fc.profiles.push_back(AggregateProfiles(model, data, s.rows, feature,
                                            fc.grid, config.threads));
    if (spec.kind == FeatureKind::kContinuous) {
      for (size_t r : s.rows) pooled_sum += data.features(r, spec.offset);
      pooled_n += s.rows.size();
    }
  }
  if (spec.kind == FeatureKind::kContinuous && pooled_n > 0) {
    fc.reference_mean = pooled_sum / static_cast<double>(pooled_n);
  }
  fc.ranks = RankSubjects(fc.profiles, fc.grid.size(), higher_is_better);
  fc.blind_spots.assign(subjects.size(), std::nullopt);
  return fc;
}

void FlagBlindSpots(FeatureComparison& fc) {
  if (fc.grid.kind != FeatureKind::kCategorical) return;
  const size_t active = static_cast<size_t>(std::count_if(
      fc.profiles.begin(), fc.profiles.end(),
      [](const auto& p) { return p.has_value(); }));
  if (active < 2) return;
  for (size_t s = 0; s < fc.profiles.size(); ++s) {
    if (!fc.profiles[s]) continue;
    const auto& ranks = fc.ranks[s];
    const int worst = *std::max_element(ranks.begin(), ranks.end());
    const int best = *std::min_element(ranks.begin(), ranks.end());
    if (worst == best) continue;
    // Among levels at the worst rank, pick the largest excess over the
    // other keepers' mean.
    std::optional<size_t> flagged;
    double flagged_excess = 0.0;
    for (size_t z = 0; z < ranks.size(); ++z) {
      if (ranks[z] != worst) continue;
      double others = 0.0;
      for (size_t o = 0; o < fc.profiles.size(); ++o) {
        if (o != s && fc.profiles[o]) others += fc.profiles[o]->values[z];
      }
      const double excess = fc.profiles[s]->values[z] -
                            others / static_cast<double>(active - 1);
      if (!flagged || excess > flagged_excess) {
        flagged = z;
        flagged_excess = excess;
      }
    }
    fc.blind_spots[s] = fc.grid.levels[*flagged];
  }
}

}  // namespace

std::string_view ToString(Workflow workflow) {
  switch (workflow) {
    case Workflow::kScoringPotential: return "scoring_potential";
    case Workflow::kGoalkeeperBlindspot: return "goalkeeper_blindspot";
    case Workflow::kSeasonComparison: return "season_comparison";
  }
  return "";
}

std::optional<Workflow> ParseWorkflow(std::string_view name) {
  std::string normalized(name);
  std::replace(normalized.begin(), normalized.end(), '-', '_');
  for (Workflow w : {Workflow::kScoringPotential, Workflow::kGoalkeeperBlindspot,
                     Workflow::kSeasonComparison}) {
    if (ToString(w) == normalized) return w;
  }
  return std::nullopt;
}

nlohmann::json AnalysisConfig::ToJson() const {
  nlohmann::json j = {{"grid_points", grid_points},
                      {"background_size", background_size},
                      {"seed", seed},
                      {"n_perm", shap.n_perm},
                      {"mode", xgx::ToString(mode)}};
  j["method"] = shap.method ? nlohmann::json(xgx::ToString(*shap.method))
                            : nlohmann::json("auto");
  return j;
}

AnalysisReport ScoringPotential(const Predictor& model,
                                const EncodedDataset& data,
                                std::span<const SubjectSpec> players,
                                std::span<const std::string> features,
                                const AnalysisConfig& config) {
  if (players.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one player required");
  }
  AnalysisReport report;
  report.workflow = Workflow::kScoringPotential;
  report.created_from = CreatedFrom(model, data, config);
  report.subjects = ResolveSubjects(data, players);
  for (const std::string& feature : features) {
    report.features.push_back(CompareOnFeature(model, data, report.subjects,
                                               feature, config,
                                               /*higher_is_better=*/true));
  }
  return report;
}

AnalysisReport GoalkeeperBlindspot(const Predictor& model,
                                   const EncodedDataset& data,
                                   std::span<const SubjectSpec> keepers,
                                   std::span<const std::string> features,
                                   const AnalysisConfig& config) {
  if (keepers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one keeper required");
  }
  GroupSelector faced;
  faced.role = Role::kConceded;
  faced.on_target = true;
  std::vector<SubjectSpec> narrowed;
  for (const SubjectSpec& k : keepers) {
    narrowed.push_back({k.label, Intersect(k.selector, faced)});
  }
  AnalysisReport report;
  report.workflow = Workflow::kGoalkeeperBlindspot;
  report.created_from = CreatedFrom(model, data, config);
  report.subjects = ResolveSubjects(data, narrowed);
  for (const std::string& feature : features) {
    FeatureComparison fc = CompareOnFeature(model, data, report.subjects,
                                            feature, config,
                                            /*higher_is_better=*/false);
    FlagBlindSpots(fc);
    report.features.push_back(std::move(fc));
  }
  return report;
}

AnalysisReport SeasonComparison(const Predictor& model,
                                const EncodedDataset& data,
                                const std::string& team,
                                const std::pair<std::string, std::string>& seasons,
                                const AnalysisConfig& config) {
  AnalysisReport report;
  report.workflow = Workflow::kSeasonComparison;
  report.created_from = CreatedFrom(model, data, config);
  report.seasons = {seasons.first, seasons.second};

  const SplitIndices split = SplitByMatch(data);
  const BackgroundSet background =
      SampleBackground(data, split.train, config.background_size, config.seed);
  const FeatureGrouping grouping = FeatureGrouping::FromEncoding(data.encoding);
  ShapOptions shap = config.shap;
  shap.seed = config.seed;

  for (const std::string& season : report.seasons) {
    GroupSelector sel;
    sel.team = team;
    sel.season = season;
    sel.role = Role::kTaken;
    Subject subject{"team=" + team + ", season=" + season, sel,
                    Select(data, sel), {}};
    if (subject.rows.empty()) {
      throw Error(ErrorCode::kEmptyGroup, "no shots for " + subject.label);
    }
    const std::vector<Attribution> members = ExplainRows(
        model, data, subject.rows, background, grouping, shap, config.threads);
    report.attributions.push_back(
        AggregateShap(members, config.mode, subject.label));
    report.metrics.push_back(ComputeMetrics(model, data, sel));
    report.subjects.push_back(std::move(subject));
  }

  const AggregatedAttribution& from = report.attributions[0];
  const AggregatedAttribution& to = report.attributions[1];
  for (size_t j = 0; j < from.features.size(); ++j) {
    report.deltas.push_back(
        {from.features[j], from.phi[j], to.phi[j], to.phi[j] - from.phi[j]});
  }
  std::stable_sort(report.deltas.begin(), report.deltas.end(),
                   [](const SeasonDelta& a, const SeasonDelta& b) {
                     return std::abs(a.delta) > std::abs(b.delta);
                   });
  return report;
}

nlohmann::json ToJson(const AnalysisReport& report) {
  nlohmann::json subjects = nlohmann::json::array();
  for (const Subject& s : report.subjects) {
    nlohmann::json js = {{"label", s.label},
                         {"selector", s.selector.Describe()},
                         {"n", s.rows.size()}};
    if (!s.warning.empty()) js["warning"] = s.warning;
    subjects.push_back(std::move(js));
  }

  nlohmann::json artifacts = nlohmann::json::array();
  nlohmann::json tables = nlohmann::json::array();
  for (const FeatureComparison& fc : report.features) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t s = 0; s < report.subjects.size(); ++s) {
      if (!fc.profiles[s]) continue;
      nlohmann::json artifact = ToJson(*fc.profiles[s]);
      artifact["type"] = "profile";
      artifact["subject"] = report.subjects[s].label;
      artifacts.push_back(std::move(artifact));
      nlohmann::json row = {{"subject", report.subjects[s].label},
                            {"values", fc.profiles[s]->values},
                            {"ranks", fc.ranks[s]}};
      if (report.workflow == Workflow::kGoalkeeperBlindspot) {
        row["blind_spot"] = fc.blind_spots[s] ? nlohmann::json(*fc.blind_spots[s])
                                              : nlohmann::json();
      }
      rows.push_back(std::move(row));
    }
    nlohmann::json table = {
        {"type", report.workflow == Workflow::kGoalkeeperBlindspot
                     ? "blind_spot"
                     : "ap_ranking"},
        {"feature", fc.feature},
        {"grid", GridValuesJson(fc.grid)},
        {"higher_is_better", report.workflow != Workflow::kGoalkeeperBlindspot},
        {"rows", rows}};
    table["reference_mean"] =
        fc.reference_mean ? nlohmann::json(*fc.reference_mean) : nlohmann::json();
    tables.push_back(std::move(table));
  }

  for (const AggregatedAttribution& a : report.attributions) {
    nlohmann::json artifact = ToJson(a);
    artifact["type"] = "aggregated_attribution";
    artifacts.push_back(std::move(artifact));
  }
  for (const MetricReport& m : report.metrics) {
    nlohmann::json artifact = ToJson(m);
    artifact["type"] = "metrics";
    artifacts.push_back(std::move(artifact));
  }
  if (report.workflow == Workflow::kSeasonComparison) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SeasonDelta& d : report.deltas) {
      rows.push_back({{"feature", d.feature},
                      {"from", d.from},
                      {"to", d.to},
                      {"delta", d.delta}});
    }
    tables.push_back({{"type", "shap_delta"},
                      {"from", report.seasons[0]},
                      {"to", report.seasons[1]},
                      {"rows", rows}});
  }

  return {{"workflow", ToString(report.workflow)},
          {"created_from", report.created_from},
          {"subjects", subjects},
          {"artifacts", artifacts},
          {"tables", tables}};
}

}  // namespace xgx
