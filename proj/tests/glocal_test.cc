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
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "test_support.h"
#include "xgx/status.h"

namespace xgx {
namespace {

using ::xgx::testing::FixtureBackground;
using ::xgx::testing::FixtureData;
using ::xgx::testing::FixtureGbt;
using ::xgx::testing::FixtureLogistic;

const std::vector<std::string>& Roster() {
  static const std::vector<std::string> roster = {
      "Youssoufa Moukoko", "Alejandro Garnacho", "Mathys Tel",
      "Jamie Bynoe-Gittens", "Evan Ferguson"};
  return roster;
}

std::vector<size_t> PlayerRows(const std::string& player) {
  GroupSelector sel;
  sel.player = player;
  sel.season = "2022/23";
  return Select(FixtureData(), sel);
}

Attribution MakeAttribution(double phi0, std::vector<double> phi) {
  Attribution a;
  a.phi0 = phi0;
  a.phi = std::move(phi);
  for (size_t j = 0; j < a.phi.size(); ++j) a.features.push_back("f" + std::to_string(j));
  a.prediction = a.Reconstruction();
  return a;
}

std::vector<Attribution> ExplainGroup(const std::vector<size_t>& rows) {
  return ExplainRows(FixtureGbt(), FixtureData(), rows, FixtureBackground(),
                     FeatureGrouping::FromEncoding(FixtureData().encoding));
}

// Naive mean of member CP values: one loop over members, one over grid.
std::vector<double> DoubleLoopAp(const Predictor& model, const std::vector<size_t>& rows,
                                 const FeatureSpec& spec, const Grid& grid) {
  std::vector<double> out(grid.size(), 0.0);
  for (size_t r : rows) {
    for (size_t g = 0; g < grid.size(); ++g) {
      std::vector<double> probe(FixtureData().row(r).begin(), FixtureData().row(r).end());
      if (spec.kind == FeatureKind::kContinuous) {
        probe[spec.offset] = grid.values[g];
      } else {
        for (size_t c = 0; c < spec.width; ++c) {
          probe[spec.offset + c] = spec.levels[c] == grid.levels[g] ? 1.0 : 0.0;
        }
      }
      out[g] += model.Predict(probe);
    }
  }
  for (double& v : out) v /= double(rows.size());
  return out;
}

// ---------------------------------------------------------------------------

TEST(AggregateShapTest, SingleMemberMeanModeIsIdentity) {
  const Attribution a = MakeAttribution(0.1, {0.05, -0.02, 0.3});
  const AggregatedAttribution agg = AggregateShap(std::vector<Attribution>{a});
  EXPECT_EQ(agg.phi, a.phi);
  EXPECT_EQ(agg.phi0, a.phi0);
  EXPECT_EQ(agg.mean_prediction, a.prediction);
  EXPECT_EQ(agg.n, 1u);
  for (double sd : agg.phi_sd) EXPECT_EQ(sd, 0.0);
}

TEST(AggregateShapTest, OpposingMembersCancel) {
  const std::vector<Attribution> members = {MakeAttribution(0.2, {0.1}),
                                            MakeAttribution(0.2, {-0.1})};
  const AggregatedAttribution agg = AggregateShap(members);
  EXPECT_EQ(agg.phi[0], 0.0);
  EXPECT_NEAR(agg.phi_sd[0], std::sqrt(0.02), 1e-15);
}

TEST(AggregateShapTest, EmptyGroupAndMixedBaselinesAreRejected) {
  try {
    AggregateShap(std::vector<Attribution>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
  const std::vector<Attribution> mixed = {MakeAttribution(0.2, {0.1}),
                                          MakeAttribution(0.2 + 1e-9, {0.1})};
  try {
    AggregateShap(mixed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMixedBaselines);
  }
}

TEST(AggregateShapTest, FergusonGroupReconstructsMeanPrediction) {
  const auto rows = PlayerRows("Evan Ferguson");
  ASSERT_EQ(rows.size(), 36u);
  const AggregatedAttribution agg = AggregateShap(ExplainGroup(rows));
  const auto preds = PredictBatch(FixtureGbt(), FixtureData().features.SelectRows(rows));
  const double mean = std::accumulate(preds.begin(), preds.end(), 0.0) / 36.0;
  double total = agg.phi0;
  for (double v : agg.phi) total += v;
  EXPECT_NEAR(total, mean, 1e-9);
  EXPECT_NEAR(agg.mean_prediction, mean, 1e-12);
}

TEST(AggregateShapTest, SumModeScalesMeanModeByGroupSize) {
  const auto rows = PlayerRows("Mathys Tel");
  const auto members = ExplainGroup(rows);
  const AggregatedAttribution mean = AggregateShap(members, AggregationMode::kMean);
  const AggregatedAttribution sum = AggregateShap(members, AggregationMode::kSum);
  const double n = double(rows.size());
  double total = n * sum.phi0;
  for (size_t j = 0; j < mean.phi.size(); ++j) {
    EXPECT_NEAR(sum.phi[j], n * mean.phi[j], 1e-12);
    total += sum.phi[j];
  }
  EXPECT_NEAR(total, n * mean.mean_prediction, 1e-9);
  EXPECT_EQ(sum.phi_sd, mean.phi_sd);
}

TEST(AggregateShapTest, DisjointUnionIsSizeWeightedMean) {
  const auto a_rows = PlayerRows("Mathys Tel");
  const auto b_rows = PlayerRows("Alejandro Garnacho");
  const auto a = ExplainGroup(a_rows);
  const auto b = ExplainGroup(b_rows);
  std::vector<Attribution> both = a;
  both.insert(both.end(), b.begin(), b.end());
  const AggregatedAttribution ga = AggregateShap(a);
  const AggregatedAttribution gb = AggregateShap(b);
  const AggregatedAttribution gu = AggregateShap(both);
  const double na = double(a.size()), nb = double(b.size());
  for (size_t j = 0; j < gu.phi.size(); ++j) {
    EXPECT_NEAR(gu.phi[j], (na * ga.phi[j] + nb * gb.phi[j]) / (na + nb), 1e-12);
  }
}

TEST(AggregateShapTest, JsonHasDocumentedKeys) {
  const auto j = ToJson(AggregateShap(std::vector<Attribution>{MakeAttribution(0.1, {0.2})},
                                      AggregationMode::kSum, "g"));
  EXPECT_EQ(j["group"], "g");
  EXPECT_EQ(j["mode"], "sum");
  EXPECT_EQ(j["n"], 1);
  for (const char* key : {"phi0", "phi_bar", "phi_sd", "mean_prediction"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

// ---------------------------------------------------------------------------

TEST(GridTest, ContinuousGridIsStrictlyIncreasingQuantiles) {
  const Grid grid = MakeGrid(FixtureData(), "distance_to_goal");
  ASSERT_GE(grid.size(), 2u);
  ASSERT_LE(grid.size(), 101u);
  for (size_t i = 1; i < grid.values.size(); ++i) EXPECT_GT(grid.values[i], grid.values[i - 1]);
  double lo = 1e9, hi = -1e9;
  for (const auto& e : FixtureData().events) {
    lo = std::min(lo, e.distance_to_goal);
    hi = std::max(hi, e.distance_to_goal);
  }
  EXPECT_EQ(grid.values.front(), lo);
  EXPECT_EQ(grid.values.back(), hi);
}

TEST(GridTest, DuplicateQuantilesAreDropped) {
  std::vector<ShotEvent> events;
  for (int i = 0; i < 10; ++i) {
    ShotEvent e = ::xgx::testing::MakeEvent();
    e.minute = i < 8 ? 5 : 90;
    events.push_back(e);
  }
  const EncodedDataset data = Encode(events, BuildEncoding(events, 0));
  const Grid grid = MakeGrid(data, "minute", 101);
  EXPECT_EQ(grid.values.front(), 5.0);
  EXPECT_EQ(grid.values.back(), 90.0);
  EXPECT_LT(grid.size(), 101u);
}

TEST(GridTest, CategoricalGridIsTheLevelList) {
  const Grid grid = MakeGrid(FixtureData(), "situation");
  EXPECT_EQ(grid.levels, FixtureData().encoding.Feature("situation").levels);
}

TEST(GridTest, UnknownFeatureIsRejected) {
  try {
    MakeGrid(FixtureData(), "height");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFeature);
  }
}

// ---------------------------------------------------------------------------

TEST(CpProfileTest, ConstantModelIsFlat) {
  const FunctionPredictor f(39, [](std::span<const double>) { return 0.42; });
  const Grid grid = MakeGrid(FixtureData(), "angle_to_goal");
  const Profile cp = CpProfile(f, FixtureData().encoding, FixtureData().row(0),
                               "angle_to_goal", grid);
  for (double v : cp.values) EXPECT_EQ(v, 0.42);
}

TEST(CpProfileTest, LogisticProfileIsMonotoneInPositiveCoefficient) {
  const LogisticModel& m = FixtureLogistic();
  const auto& enc = FixtureData().encoding;
  for (const auto& spec : enc.features()) {
    if (spec.kind != FeatureKind::kContinuous) continue;
    const double beta = m.coefficients()[spec.offset];
    const Profile cp = CpProfile(m, enc, FixtureData().row(3), spec.name,
                                 MakeGrid(FixtureData(), spec.name));
    for (size_t i = 1; i < cp.values.size(); ++i) {
      if (beta > 0) EXPECT_GT(cp.values[i], cp.values[i - 1]) << spec.name;
      if (beta < 0) EXPECT_LT(cp.values[i], cp.values[i - 1]) << spec.name;
    }
  }
}

TEST(CpProfileTest, PassesThroughTheObservationExactly) {
  const auto& data = FixtureData();
  for (const std::string feature : {"distance_to_goal", "angle_to_goal", "minute",
                                    "situation", "last_action"}) {
    const Grid grid = MakeGrid(data, feature);
    for (size_t i = 0; i < data.size(); i += 2503) {
      const auto x = data.row(i);
      const Profile cp = CpProfile(FixtureGbt(), data.encoding, x, feature, grid);
      const auto raw = RawFeature(data.events[i], feature);
      size_t at = 0;
      if (const double* d = std::get_if<double>(&raw)) {
        at = size_t(std::find(cp.grid.values.begin(), cp.grid.values.end(), *d) -
                    cp.grid.values.begin());
        ASSERT_LT(at, cp.grid.values.size());
      } else {
        const FeatureSpec& spec = data.encoding.Feature(feature);
        at = *spec.LevelIndex(std::get<std::string>(raw));
      }
      EXPECT_EQ(cp.values[at], FixtureGbt().Predict(x)) << feature << " row " << i;
    }
  }
}

TEST(CpProfileTest, ValuesStayInUnitInterval) {
  const Profile cp = CpProfile(FixtureGbt(), FixtureData().encoding, FixtureData().row(9),
                               "distance_to_goal", MakeGrid(FixtureData(), "distance_to_goal"));
  for (double v : cp.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

// ---------------------------------------------------------------------------

TEST(AggregateProfilesTest, RosterMatchesDoubleLoopOracle) {
  const auto& enc = FixtureData().encoding;
  for (const std::string feature : {"distance_to_goal", "angle_to_goal", "shot_type"}) {
    const Grid grid = MakeGrid(FixtureData(), feature);
    for (const std::string& player : Roster()) {
      const auto rows = PlayerRows(player);
      const Profile ap = AggregateProfiles(FixtureGbt(), FixtureData(), rows, feature, grid);
      const auto expected = DoubleLoopAp(FixtureGbt(), rows, enc.Feature(feature), grid);
      EXPECT_EQ(ap.k, rows.size());
      ASSERT_EQ(ap.values.size(), expected.size());
      for (size_t g = 0; g < expected.size(); ++g) {
        EXPECT_NEAR(ap.values[g], expected[g], 1e-12) << player << " " << feature;
      }
    }
  }
}

TEST(AggregateProfilesTest, GroupOfOneIsItsCp) {
  const Grid grid = MakeGrid(FixtureData(), "angle_to_goal");
  const std::vector<size_t> rows = {77};
  const Profile ap = AggregateProfiles(FixtureGbt(), FixtureData(), rows, "angle_to_goal", grid);
  for (size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> probe(FixtureData().row(77).begin(), FixtureData().row(77).end());
    ApplyGridPoint(FixtureData().encoding.Feature("angle_to_goal"), grid, g, probe);
    EXPECT_EQ(ap.values[g], FixtureGbt().Predict(probe));
  }
  EXPECT_EQ(*ap.group_feature_mean, FixtureData().events[77].angle_to_goal);
}

TEST(AggregateProfilesTest, RowsDifferingOnlyInProfiledFeatureShareTheCp) {
  std::vector<ShotEvent> events = {::xgx::testing::MakeEvent(), ::xgx::testing::MakeEvent()};
  events[1].distance_to_goal = 30.0;
  const EncodedDataset data = Encode(events, FixtureData().encoding);
  const Grid grid = MakeGrid(FixtureData(), "distance_to_goal");
  const Profile a = AggregateProfiles(FixtureGbt(), data, std::vector<size_t>{0}, "distance_to_goal", grid);
  const Profile b = AggregateProfiles(FixtureGbt(), data, std::vector<size_t>{1}, "distance_to_goal", grid);
  const Profile ab = AggregateProfiles(FixtureGbt(), data, std::vector<size_t>{0, 1}, "distance_to_goal", grid);
  EXPECT_EQ(a.values, b.values);
  for (size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(ab.values[g], a.values[g], 1e-15);
}

TEST(AggregateProfilesTest, DisjointUnionIsSizeWeightedMean) {
  const Grid grid = MakeGrid(FixtureData(), "distance_to_goal");
  const auto a = PlayerRows("Evan Ferguson");
  const auto b = PlayerRows("Youssoufa Moukoko");
  std::vector<size_t> both = a;
  both.insert(both.end(), b.begin(), b.end());
  std::sort(both.begin(), both.end());
  const Profile pa = AggregateProfiles(FixtureGbt(), FixtureData(), a, "distance_to_goal", grid);
  const Profile pb = AggregateProfiles(FixtureGbt(), FixtureData(), b, "distance_to_goal", grid);
  const Profile pu = AggregateProfiles(FixtureGbt(), FixtureData(), both, "distance_to_goal", grid);
  const double na = double(a.size()), nb = double(b.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    EXPECT_NEAR(pu.values[g], (na * pa.values[g] + nb * pb.values[g]) / (na + nb), 1e-12);
  }
}

TEST(AggregateProfilesTest, EmptyGroupIsRejected) {
  try {
    AggregateProfiles(FixtureGbt(), FixtureData(), std::vector<size_t>{}, "minute",
                      MakeGrid(FixtureData(), "minute"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
}

TEST(AggregateProfilesTest, ThreadCountDoesNotChangeBits) {
  const Grid grid = MakeGrid(FixtureData(), "distance_to_goal");
  std::vector<size_t> rows;
  for (size_t i = 0; i < 500; ++i) rows.push_back(i * 7);
  const Profile one = AggregateProfiles(FixtureGbt(), FixtureData(), rows, "distance_to_goal", grid, 1);
  const Profile many = AggregateProfiles(FixtureGbt(), FixtureData(), rows, "distance_to_goal", grid, 8);
  EXPECT_EQ(one.values, many.values);
}

// ---------------------------------------------------------------------------

TEST(PdpTest, EqualsApOverAllRowsBitwise) {
  const Grid grid = MakeGrid(FixtureData(), "situation");
  std::vector<size_t> all(FixtureData().size());
  std::iota(all.begin(), all.end(), size_t{0});
  const Profile pdp = Pdp(FixtureGbt(), FixtureData(), "situation", grid);
  const Profile ap = AggregateProfiles(FixtureGbt(), FixtureData(), all, "situation", grid);
  EXPECT_EQ(pdp.values, ap.values);
  EXPECT_EQ(ToString(pdp.kind), "PDP");
  EXPECT_EQ(pdp.k, FixtureData().size());
}

TEST(PdpTest, SingleRowDatasetIsTheCp) {
  const EncodedDataset one = Subset(FixtureData(), std::vector<size_t>{123});
  const Grid grid = MakeGrid(FixtureData(), "minute");
  const Profile pdp = Pdp(FixtureGbt(), one, "minute", grid);
  const Profile ap = AggregateProfiles(FixtureGbt(), FixtureData(), std::vector<size_t>{123}, "minute", grid);
  EXPECT_EQ(pdp.values, ap.values);
}

TEST(PdpTest, AdditiveModelRecoversComponentShape) {
  const auto& enc = FixtureData().encoding;
  const size_t d = enc.Feature("distance_to_goal").offset;
  const size_t a = enc.Feature("angle_to_goal").offset;
  auto g = [](double z) { return 0.3 * std::exp(-z / 10.0); };
  const FunctionPredictor f(enc.num_columns(), [&](std::span<const double> r) {
    return g(r[d]) + 0.001 * r[a];
  });
  const Grid grid = MakeGrid(FixtureData(), "distance_to_goal");
  const Profile pdp = Pdp(f, FixtureData(), "distance_to_goal", grid);
  double shift_sum = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) shift_sum += pdp.values[i] - g(grid.values[i]);
  const double shift = shift_sum / double(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(pdp.values[i] - shift, g(grid.values[i]), 1e-12);
  }
}

TEST(ProfileJsonTest, HasDocumentedKeys) {
  const Profile ap = AggregateProfiles(FixtureGbt(), FixtureData(), PlayerRows("Mathys Tel"),
                                       "home_away", MakeGrid(FixtureData(), "home_away"));
  const auto j = ToJson(ap);
  EXPECT_EQ(j["kind"], "AP");
  EXPECT_EQ(j["k"], 20);
  EXPECT_EQ(j["grid"], nlohmann::json(FixtureData().encoding.Feature("home_away").levels));
  EXPECT_TRUE(j["group_feature_mean"].is_null());
  EXPECT_EQ(j["values"].size(), 2u);
}

}  // namespace
}  // namespace xgx
