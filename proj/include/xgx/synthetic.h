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

#ifndef XGX_SYNTHETIC_H_
#define XGX_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "xgx/event_data.h"

namespace xgx::synth {

// Goal probability under the generator's logistic ground truth.
double TrueGoalProbability(const ShotEvent& event);

// The 39 last-action labels the generators draw from, most frequent first.
const std::vector<std::string>& LastActionLabels();

struct LabeledShot {
  ShotEvent event;
  double true_probability = 0.0;
};

// Independent shots with generic metadata (about 24 per match).
std::vector<LabeledShot> GenerateShots(size_t n, uint64_t seed);

// Player and team totals the fixture corpus is built to contain.
struct PlayerTarget {
  std::string player;
  std::string team;
  std::string league;
  int shots;
  int goals;
};
struct KeeperTarget {
  std::string keeper;
  std::string team;
  std::string league;
  int conceded_goals;
};

const std::vector<PlayerTarget>& PlayerTargets();  // 2022/23 season
const std::vector<KeeperTarget>& KeeperTargets();  // 2022/23 season

// League-structured corpus: three full 2022/23 leagues plus two-season mini
// leagues around SSC Napoli (2021/22, 2022/23) and Lille OSC (2020/21,
// 2021/22). Player shot/goal counts and keeper-team conceded goals match the
// targets exactly; everything else follows the ground truth.
std::vector<ShotEvent> GenerateFixtureCorpus(uint64_t seed = 2023);

}  // namespace xgx::synth

#endif  // XGX_SYNTHETIC_H_
