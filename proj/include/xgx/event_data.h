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

#ifndef XGX_EVENT_DATA_H_
#define XGX_EVENT_DATA_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xgx/matrix.h"

namespace xgx {

enum class HomeAway { kHome, kAway };
enum class Situation {
  kOpenPlay,
  kFromCorner,
  kSetPiece,
  kDirectFreekick,
  kPenalty
};
enum class ShotType { kHead, kLeftFoot, kRightFoot, kOtherBodyPart };

std::string_view ToString(HomeAway v);
std::string_view ToString(Situation v);
std::string_view ToString(ShotType v);
std::optional<HomeAway> ParseHomeAway(std::string_view s);
std::optional<Situation> ParseSituation(std::string_view s);
std::optional<ShotType> ParseShotType(std::string_view s);

// One shot. Angle is in degrees with 90 meaning straight in front of goal;
// distance is in meters.
struct ShotEvent {
  std::string match_id;
  std::string player;
  std::string team;
  std::string opponent;
  std::string season;
  std::string league;
  int minute = 0;
  HomeAway home_away = HomeAway::kHome;
  Situation situation = Situation::kOpenPlay;
  ShotType shot_type = ShotType::kRightFoot;
  std::string last_action;
  double distance_to_goal = 0.0;
  double angle_to_goal = 90.0;
  bool is_goal = false;
  bool on_target = false;

  bool operator==(const ShotEvent&) const = default;
};

// The fixed CSV header, in column order.
inline constexpr std::string_view kCsvHeader =
    "match_id,player,team,opponent,season,league,minute,home_away,situation,"
    "shot_type,last_action,distance_to_goal,angle_to_goal,is_goal,on_target";

// Returns an empty string when the event satisfies every schema invariant,
// otherwise a description of the first violation.
std::string ValidateEvent(const ShotEvent& event);

// Parses CSV text. Throws Error with kMissingColumn, kBadValue (row number is
// 1-based over data rows) or kEmptyFile.
std::vector<ShotEvent> ParseCsv(std::istream& in);
std::vector<ShotEvent> ParseCsvFile(const std::string& path);

void WriteCsv(std::ostream& out, std::span<const ShotEvent> events);
void WriteCsvFile(const std::string& path, std::span<const ShotEvent> events);

// ---------------------------------------------------------------------------
// Encoding

enum class FeatureKind { kContinuous, kCategorical };

inline constexpr std::string_view kOtherLevel = "OTHER";

// One model feature and the encoded columns it occupies. Categorical
// features own `levels.size()` one-hot columns starting at `offset`; the
// OTHER level, when present, is always the last one.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<std::string> levels;
  size_t offset = 0;
  size_t width = 1;

  bool has_other() const {
    return !levels.empty() && levels.back() == kOtherLevel;
  }
  // Index of `level`, or of OTHER when the level is unknown and OTHER
  // exists; nullopt otherwise.
  std::optional<size_t> LevelIndex(std::string_view level) const;

  bool operator==(const FeatureSpec&) const = default;
};

// The seven raw shot features in canonical order.
inline constexpr std::string_view kFeatureNames[] = {
    "minute",        "home_away",        "situation",    "shot_type",
    "last_action",   "distance_to_goal", "angle_to_goal"};

using FeatureValue = std::variant<double, std::string>;

// Raw value of the named feature for an event. Categorical features are
// returned as their level label.
FeatureValue RawFeature(const ShotEvent& event, std::string_view feature);

class FeatureEncoding {
 public:
  FeatureEncoding() = default;
  FeatureEncoding(std::vector<FeatureSpec> features, int rare_threshold);

  const std::vector<FeatureSpec>& features() const { return features_; }
  size_t num_features() const { return features_.size(); }
  size_t num_columns() const { return num_columns_; }
  int rare_threshold() const { return rare_threshold_; }

  // Throws Error(kUnknownFeature).
  const FeatureSpec& Feature(std::string_view name) const;
  size_t FeatureIndex(std::string_view name) const;
  bool HasFeature(std::string_view name) const;

  std::vector<std::string> ColumnNames() const;

  // Writes the encoded representation of `event` into `row`
  // (size num_columns()). Throws Error(kUnknownLevel) when a categorical
  // level is out of vocabulary and the feature has no OTHER level.
  void EncodeInto(const ShotEvent& event, std::span<double> row) const;

  // Recovers the raw feature values (in canonical order) from an encoded
  // row. Merged levels decode to OTHER.
  std::vector<FeatureValue> Decode(std::span<const double> row) const;

  bool operator==(const FeatureEncoding&) const = default;

 private:
  std::vector<FeatureSpec> features_;
  size_t num_columns_ = 0;
  int rare_threshold_ = 0;
};

inline constexpr int kDefaultRareThreshold = 25;

// Builds the vocabulary. Levels seen fewer than `rare_threshold` times are
// merged into OTHER; kept levels are sorted by descending frequency, ties
// lexicographically. Throws Error(kEmptyInput).
FeatureEncoding BuildEncoding(std::span<const ShotEvent> events,
                              int rare_threshold = kDefaultRareThreshold);

// Encoded design matrix plus labels and the events it came from (the events
// carry the grouping metadata, aligned by row).
struct EncodedDataset {
  Matrix features;
  std::vector<double> is_goal;
  std::vector<double> on_target;
  FeatureEncoding encoding;
  std::vector<ShotEvent> events;

  size_t size() const { return features.rows(); }
  std::span<const double> row(size_t i) const { return features.row(i); }

  // Content hash over matrix, labels and encoding.
  std::string Fingerprint() const;
};

// Throws Error(kEmptyInput) for no events; see EncodeInto for kUnknownLevel.
EncodedDataset Encode(std::span<const ShotEvent> events,
                      const FeatureEncoding& encoding);

// ---------------------------------------------------------------------------
// Selection

enum class Role { kTaken, kConceded };

// Conjunction of equality filters. With role kConceded the `team` filter is
// matched against the opponent column (shots conceded by that team).
struct GroupSelector {
  std::optional<std::string> player;
  std::optional<std::string> team;
  std::optional<std::string> opponent;
  std::optional<std::string> season;
  std::optional<std::string> league;
  std::optional<HomeAway> home_away;
  std::optional<bool> on_target;
  std::optional<Role> role;

  bool Matches(const ShotEvent& event) const;

  // "key=value" terms joined by ", " in a fixed key order; "all" when empty.
  std::string Describe() const;

  bool operator==(const GroupSelector&) const = default;
};

// Parses "key=value" terms. Keys: player, team, opponent, season, league,
// home_away, on_target (0/1/true/false), role (taken/conceded). Values may
// be wrapped in double quotes. Throws Error(kInvalidArgument).
GroupSelector ParseSelector(std::span<const std::string> terms);

// Conjunction of two selectors. Throws Error(kInvalidArgument) when both
// constrain the same key to different values.
GroupSelector Intersect(const GroupSelector& a, const GroupSelector& b);

// Sorted row indices whose events match.
std::vector<size_t> Select(const EncodedDataset& dataset,
                           const GroupSelector& selector);

// Deterministic match-level split: a match goes to the training fold when
// its id hashes into the lowest `train_percent` of 100 buckets.
bool IsTrainingMatch(std::string_view match_id, int train_percent = 80);

struct SplitIndices {
  std::vector<size_t> train;
  std::vector<size_t> test;
};
SplitIndices SplitByMatch(const EncodedDataset& dataset,
                          int train_percent = 80);

// Subset of a dataset keeping the listed rows in order.
EncodedDataset Subset(const EncodedDataset& dataset,
                      std::span<const size_t> rows);

}  // namespace xgx

#endif  // XGX_EVENT_DATA_H_
