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

#include <filesystem>
#include <vector>

#include "gtest/gtest.h"
#include "test_support.h"
#include "xgx/status.h"

namespace xgx {
namespace {

using ::xgx::testing::FixtureData;
using ::xgx::testing::FixtureGbt;
using ::xgx::testing::MakeEvent;
using ::xgx::testing::MakeTempDir;
using ::xgx::testing::ReadFile;

std::vector<SubjectSpec> RosterSpecs() {
  std::vector<SubjectSpec> specs;
  for (const char* player : {"Youssoufa Moukoko", "Alejandro Garnacho", "Mathys Tel",
                             "Jamie Bynoe-Gittens", "Evan Ferguson"}) {
    GroupSelector sel;
    sel.player = player;
    sel.season = "2022/23";
    specs.push_back({player, sel});
  }
  return specs;
}

std::vector<SubjectSpec> KeeperSpecs() {
  std::vector<SubjectSpec> specs;
  for (const char* team : {"FC Köln", "RCD Espanyol", "Brentford FC"}) {
    GroupSelector sel;
    sel.team = team;
    sel.season = "2022/23";
    specs.push_back({team, sel});
  }
  return specs;
}

double NaiveApPoint(const Predictor& model, const EncodedDataset& data,
                    const std::vector<size_t>& rows, const FeatureSpec& spec,
                    const Grid& grid, size_t g) {
  double sum = 0.0;
  for (size_t r : rows) {
    std::vector<double> probe(data.row(r).begin(), data.row(r).end());
    if (spec.kind == FeatureKind::kContinuous) {
      probe[spec.offset] = grid.values[g];
    } else {
      for (size_t c = 0; c < spec.width; ++c) {
        probe[spec.offset + c] = spec.levels[c] == grid.levels[g] ? 1.0 : 0.0;
      }
    }
    sum += model.Predict(probe);
  }
  return sum / double(rows.size());
}

// ---------------------------------------------------------------------------

TEST(ScoringPotentialTest, ConstantModelGivesFlatProfileAndAllTies) {
  const FunctionPredictor f(39, [](std::span<const double>) { return 0.2; });
  const std::vector<SubjectSpec> specs = {RosterSpecs()[0], RosterSpecs()[2]};
  const AnalysisReport r = ScoringPotential(f, FixtureData(), specs, kScoringDefaultFeatures);
  ASSERT_EQ(r.features.size(), 2u);
  for (const auto& fc : r.features) {
    for (size_t s = 0; s < specs.size(); ++s) {
      for (double v : fc.profiles[s]->values) EXPECT_EQ(v, 0.2);
      for (int rank : fc.ranks[s]) EXPECT_EQ(rank, 1);
    }
  }
}

TEST(ScoringPotentialTest, RosterProfilesMatchNaiveRecomputation) {
  const auto specs = RosterSpecs();
  const AnalysisReport r =
      ScoringPotential(FixtureGbt(), FixtureData(), specs, kScoringDefaultFeatures);
  ASSERT_EQ(r.features.size(), 2u);
  for (const auto& fc : r.features) {
    ASSERT_EQ(fc.profiles.size(), 5u);
    for (const auto& p : fc.profiles) ASSERT_TRUE(p.has_value());
    const auto& ferguson = *fc.profiles[4];
    const auto rows = r.subjects[4].rows;
    ASSERT_EQ(rows.size(), 36u);
    const FeatureSpec& spec = FixtureData().encoding.Feature(fc.feature);
    for (size_t g : {size_t{0}, fc.grid.size() - 1}) {
      EXPECT_NEAR(ferguson.values[g],
                  NaiveApPoint(FixtureGbt(), FixtureData(), rows, spec, fc.grid, g), 1e-12);
    }
    ASSERT_TRUE(fc.reference_mean.has_value());
    // Higher is better: rank 1 holds the maximum at each grid point.
    for (size_t g = 0; g < fc.grid.size(); ++g) {
      double best = -1.0;
      for (const auto& p : fc.profiles) best = std::max(best, p->values[g]);
      for (size_t s = 0; s < 5; ++s) {
        if (fc.profiles[s]->values[g] == best) EXPECT_EQ(fc.ranks[s][g], 1);
      }
    }
  }
  EXPECT_EQ(r.created_from["dataset_fingerprint"], FixtureData().Fingerprint());
}

TEST(ScoringPotentialTest, IdenticalShotsGiveIdenticalProfiles) {
  std::vector<ShotEvent> events;
  for (int i = 0; i < 6; ++i) {
    ShotEvent a = MakeEvent("m" + std::to_string(i), "Twin A");
    a.distance_to_goal = 5.0 + 3.0 * i;
    ShotEvent b = a;
    b.player = "Twin B";
    events.push_back(a);
    events.push_back(b);
  }
  const EncodedDataset data = Encode(events, FixtureData().encoding);
  GroupSelector sa, sb;
  sa.player = "Twin A";
  sb.player = "Twin B";
  const std::vector<SubjectSpec> specs = {{"A", sa}, {"B", sb}};
  const AnalysisReport r = ScoringPotential(FixtureGbt(), data, specs, kScoringDefaultFeatures);
  for (const auto& fc : r.features) {
    EXPECT_EQ(fc.profiles[0]->values, fc.profiles[1]->values);
  }
}

TEST(ScoringPotentialTest, EmptyPlayerIsSkippedWithWarning) {
  auto specs = RosterSpecs();
  GroupSelector nobody;
  nobody.player = "Nobody";
  specs.push_back({"Nobody", nobody});
  const AnalysisReport r = ScoringPotential(FixtureGbt(), FixtureData(), specs,
                                            std::vector<std::string>{"distance_to_goal"});
  EXPECT_TRUE(r.subjects.back().skipped());
  EXPECT_NE(r.subjects.back().warning.find("EmptyGroup"), std::string::npos);
  EXPECT_FALSE(r.features[0].profiles.back().has_value());
  const auto j = ToJson(r);
  EXPECT_TRUE(j["subjects"][5].contains("warning"));

  const std::vector<SubjectSpec> only_empty = {{"Nobody", nobody}};
  try {
    ScoringPotential(FixtureGbt(), FixtureData(), only_empty, kScoringDefaultFeatures);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
}

TEST(ScoringPotentialTest, ReversingSubjectsPermutesRowsOnly) {
  auto specs = RosterSpecs();
  const AnalysisReport fwd = ScoringPotential(FixtureGbt(), FixtureData(), specs,
                                              std::vector<std::string>{"angle_to_goal"});
  std::reverse(specs.begin(), specs.end());
  const AnalysisReport rev = ScoringPotential(FixtureGbt(), FixtureData(), specs,
                                              std::vector<std::string>{"angle_to_goal"});
  for (size_t s = 0; s < 5; ++s) {
    EXPECT_EQ(fwd.features[0].profiles[s]->values, rev.features[0].profiles[4 - s]->values);
    EXPECT_EQ(fwd.features[0].ranks[s], rev.features[0].ranks[4 - s]);
  }
}

// ---------------------------------------------------------------------------

TEST(GoalkeeperBlindspotTest, KeeperFixtureMatchesNaiveRecomputation) {
  const AnalysisReport r = GoalkeeperBlindspot(FixtureGbt(), FixtureData(), KeeperSpecs(),
                                               kBlindspotDefaultFeatures);
  ASSERT_EQ(r.features.size(), 3u);
  EXPECT_EQ(r.subjects[0].rows.size(), 163u);
  EXPECT_EQ(r.subjects[1].rows.size(), 175u);
  EXPECT_EQ(r.subjects[2].rows.size(), 151u);
  for (const Subject& s : r.subjects) {
    ASSERT_TRUE(s.selector.role.has_value());
    EXPECT_EQ(*s.selector.role, Role::kConceded);
    EXPECT_EQ(s.selector.on_target, std::optional<bool>(true));
  }
  for (const auto& fc : r.features) {
    const FeatureSpec& spec = FixtureData().encoding.Feature(fc.feature);
    for (size_t k = 0; k < 3; ++k) {
      for (size_t g = 0; g < fc.grid.size(); ++g) {
        EXPECT_NEAR(fc.profiles[k]->values[g],
                    NaiveApPoint(FixtureGbt(), FixtureData(), r.subjects[k].rows, spec,
                                 fc.grid, g),
                    1e-12);
      }
    }
    // Lower is better.
    for (size_t g = 0; g < fc.grid.size(); ++g) {
      double best = 2.0;
      for (const auto& p : fc.profiles) best = std::min(best, p->values[g]);
      for (size_t k = 0; k < 3; ++k) {
        if (fc.profiles[k]->values[g] == best) EXPECT_EQ(fc.ranks[k][g], 1);
      }
    }
    // A flag names a level where that keeper holds its worst rank.
    for (size_t k = 0; k < 3; ++k) {
      if (!fc.blind_spots[k]) continue;
      const auto& ranks = fc.ranks[k];
      const size_t z = size_t(std::find(fc.grid.levels.begin(), fc.grid.levels.end(),
                                        *fc.blind_spots[k]) - fc.grid.levels.begin());
      EXPECT_EQ(ranks[z], *std::max_element(ranks.begin(), ranks.end()));
    }
  }
}

TEST(GoalkeeperBlindspotTest, SingleConcededShotGivesKOne) {
  ShotEvent e = MakeEvent("m1", "Striker", "B", "Keepers FC");
  e.on_target = true;
  ShotEvent off = MakeEvent("m1", "Striker", "B", "Keepers FC");
  const EncodedDataset data = Encode(std::vector<ShotEvent>{e, off}, FixtureData().encoding);
  GroupSelector sel;
  sel.team = "Keepers FC";
  const std::vector<SubjectSpec> specs = {{"K", sel}};
  const AnalysisReport r = GoalkeeperBlindspot(FixtureGbt(), data, specs,
                                               kBlindspotDefaultFeatures);
  for (const auto& fc : r.features) {
    EXPECT_EQ(fc.profiles[0]->k, 1u);
    EXPECT_EQ(fc.profiles[0]->values.size(), fc.grid.size());
    EXPECT_FALSE(fc.blind_spots[0].has_value());
  }
}

TEST(GoalkeeperBlindspotTest, IdenticalConcededSetsRaiseNoFlags) {
  std::vector<ShotEvent> events;
  for (int i = 0; i < 10; ++i) {
    for (const char* keeper : {"K1", "K2", "K3"}) {
      ShotEvent e = MakeEvent("m" + std::to_string(i), "S", "Shooters", keeper);
      e.on_target = true;
      e.situation = i % 2 ? Situation::kOpenPlay : Situation::kFromCorner;
      e.shot_type = i % 3 ? ShotType::kHead : ShotType::kLeftFoot;
      e.distance_to_goal = 6.0 + i;
      events.push_back(e);
    }
  }
  const EncodedDataset data = Encode(events, FixtureData().encoding);
  std::vector<SubjectSpec> specs;
  for (const char* keeper : {"K1", "K2", "K3"}) {
    GroupSelector sel;
    sel.team = keeper;
    specs.push_back({keeper, sel});
  }
  const AnalysisReport r = GoalkeeperBlindspot(FixtureGbt(), data, specs,
                                               kBlindspotDefaultFeatures);
  for (const auto& fc : r.features) {
    for (const auto& flag : fc.blind_spots) EXPECT_FALSE(flag.has_value());
  }
}

// ---------------------------------------------------------------------------

EncodedDataset TwoSeasonData(double shift, bool constant_minute) {
  std::vector<ShotEvent> events;
  for (const auto& e : FixtureData().events) {
    if (e.team != "FC Köln" || e.season != "2022/23") continue;
    ShotEvent a = e;
    if (constant_minute) a.minute = 50;
    ShotEvent b = a;
    b.season = "2023/24";
    b.match_id = a.match_id + "-next";
    b.distance_to_goal = std::max(0.5, a.distance_to_goal - shift);
    if (b.situation == Situation::kPenalty) b.distance_to_goal = a.distance_to_goal;
    events.push_back(a);
    events.push_back(b);
  }
  return Encode(events, FixtureData().encoding);
}

TEST(SeasonComparisonTest, SameSeasonTwiceHasZeroDeltas) {
  const AnalysisReport r = SeasonComparison(FixtureGbt(), FixtureData(), "FC Köln",
                                            {"2022/23", "2022/23"});
  ASSERT_EQ(r.deltas.size(), 7u);
  for (const auto& d : r.deltas) EXPECT_EQ(d.delta, 0.0);
  ASSERT_EQ(r.metrics.size(), 2u);
  ASSERT_EQ(r.attributions.size(), 2u);
}

TEST(SeasonComparisonTest, MovingShotsCloserRaisesDistanceContribution) {
  const EncodedDataset data = TwoSeasonData(5.0, false);
  const AnalysisReport r =
      SeasonComparison(FixtureGbt(), data, "FC Köln", {"2022/23", "2023/24"});
  const auto it = std::find_if(r.deltas.begin(), r.deltas.end(),
                               [](const SeasonDelta& d) { return d.feature == "distance_to_goal"; });
  ASSERT_NE(it, r.deltas.end());
  EXPECT_GT(it->delta, 0.0);

  // Oracle: exact SHAP over each constructed group with the same background.
  const auto split = SplitByMatch(data);
  const BackgroundSet bg = SampleBackground(data, split.train, kDefaultBackgroundSize, 42);
  const auto grouping = FeatureGrouping::FromEncoding(data.encoding);
  const size_t j = data.encoding.FeatureIndex("distance_to_goal");
  double mean[2] = {0.0, 0.0};
  size_t n[2] = {0, 0};
  for (size_t i = 0; i < data.size(); ++i) {
    const int s = data.events[i].season == "2023/24";
    mean[s] += ExactShap(FixtureGbt(), data.row(i), bg, grouping).phi[j];
    n[s] += 1;
  }
  EXPECT_NEAR(it->delta, mean[1] / double(n[1]) - mean[0] / double(n[0]), 1e-12);
  // Sorted by descending |delta|.
  for (size_t k = 1; k < r.deltas.size(); ++k) {
    EXPECT_GE(std::abs(r.deltas[k - 1].delta), std::abs(r.deltas[k].delta));
  }
}

TEST(SeasonComparisonTest, IgnoredConstantFeatureHasZeroDelta) {
  const EncodedDataset data = TwoSeasonData(4.0, true);
  const size_t minute = data.encoding.Feature("minute").offset;
  const FunctionPredictor f(data.encoding.num_columns(), [&](std::span<const double> r) {
    std::vector<double> copy(r.begin(), r.end());
    copy[minute] = 0.0;
    return FixtureGbt().Predict(copy);
  });
  const AnalysisReport r = SeasonComparison(f, data, "FC Köln", {"2022/23", "2023/24"});
  for (const auto& d : r.deltas) {
    if (d.feature == "minute") EXPECT_EQ(d.delta, 0.0);
  }
}

TEST(SeasonComparisonTest, EmptySeasonIsEmptyGroup) {
  try {
    SeasonComparison(FixtureGbt(), FixtureData(), "FC Köln", {"2022/23", "1999/00"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
}

// ---------------------------------------------------------------------------

TEST(ReportJsonTest, FollowsTheSchema) {
  const AnalysisReport r = ScoringPotential(FixtureGbt(), FixtureData(), RosterSpecs(),
                                            kScoringDefaultFeatures);
  const auto j = ToJson(r);
  EXPECT_EQ(j["workflow"], "scoring_potential");
  for (const char* key : {"model_fingerprint", "dataset_fingerprint", "config"}) {
    EXPECT_TRUE(j["created_from"].contains(key)) << key;
  }
  EXPECT_EQ(j["subjects"].size(), 5u);
  EXPECT_EQ(j["artifacts"].size(), 10u);
  EXPECT_EQ(j["tables"].size(), 2u);
  EXPECT_EQ(j["tables"][0]["type"], "ap_ranking");
  EXPECT_EQ(j["tables"][0]["rows"].size(), 5u);

  const AnalysisReport s = SeasonComparison(FixtureGbt(), FixtureData(), "SSC Napoli",
                                            {"2021/22", "2022/23"});
  const auto js = ToJson(s);
  EXPECT_EQ(js["tables"].back()["type"], "shap_delta");
  EXPECT_EQ(js["tables"].back()["rows"].size(), 7u);
  EXPECT_EQ(js["artifacts"].size(), 4u);  // Two aggregates, two metric reports.
}

TEST(WorkflowNameTest, AcceptsDashesAndUnderscores) {
  EXPECT_EQ(ParseWorkflow("scoring-potential"), Workflow::kScoringPotential);
  EXPECT_EQ(ParseWorkflow("goalkeeper_blindspot"), Workflow::kGoalkeeperBlindspot);
  EXPECT_EQ(ParseWorkflow("season-comparison"), Workflow::kSeasonComparison);
  EXPECT_FALSE(ParseWorkflow("transfer-market").has_value());
}

// ---------------------------------------------------------------------------

TEST(RenderSvgTest, EmptyFeatureListWritesNothing) {
  const AnalysisReport r = ScoringPotential(FixtureGbt(), FixtureData(), RosterSpecs(),
                                            std::vector<std::string>{});
  const std::string dir = MakeTempDir("svg_empty");
  EXPECT_TRUE(RenderSvg(r, dir).empty());
  EXPECT_TRUE(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}

TEST(RenderSvgTest, OneFilePerFeatureRegardlessOfPlayers) {
  const std::vector<std::string> features = {"distance_to_goal", "angle_to_goal", "shot_type"};
  for (size_t players : {1u, 5u}) {
    const auto specs = RosterSpecs();
    const std::vector<SubjectSpec> some(specs.begin(), specs.begin() + players);
    const AnalysisReport r = ScoringPotential(FixtureGbt(), FixtureData(), some, features);
    const std::string dir = MakeTempDir("svg_count");
    const auto paths = RenderSvg(r, dir);
    ASSERT_EQ(paths.size(), features.size());
    for (size_t f = 0; f < features.size(); ++f) {
      EXPECT_EQ(std::filesystem::path(paths[f]).filename(),
                "scoring_potential_" + features[f] + ".svg");
      const std::string svg = ReadFile(paths[f]);
      EXPECT_EQ(svg.rfind("<svg", 0), 0u) << svg.substr(0, 40);
    }
    std::filesystem::remove_all(dir);
  }
}

TEST(RenderSvgTest, RenderingIsByteDeterministic) {
  const AnalysisReport a = GoalkeeperBlindspot(FixtureGbt(), FixtureData(), KeeperSpecs(),
                                               kBlindspotDefaultFeatures);
  const AnalysisReport s = SeasonComparison(FixtureGbt(), FixtureData(), "Lille OSC",
                                            {"2020/21", "2021/22"});
  for (const AnalysisReport* r : {&a, &s}) {
    const auto first = RenderSvgDocuments(*r);
    const auto second = RenderSvgDocuments(*r);
    ASSERT_FALSE(first.empty());
    EXPECT_EQ(first, second);
  }
  // One signed-bar chart per season, each annotated with the baseline.
  const auto docs = RenderSvgDocuments(s);
  ASSERT_EQ(docs.size(), 2u);
  for (const auto& [name, svg] : docs) {
    EXPECT_EQ(name.rfind("season_comparison_", 0), 0u) << name;
    EXPECT_NE(svg.find("baseline phi0"), std::string::npos);
  }
  // Continuous profile charts carry the dashed reference line.
  const AnalysisReport p = ScoringPotential(FixtureGbt(), FixtureData(), RosterSpecs(),
                                            std::vector<std::string>{"distance_to_goal"});
  EXPECT_NE(RenderSvgDocuments(p)[0].second.find("stroke-dasharray"), std::string::npos);
}

}  // namespace
}  // namespace xgx
