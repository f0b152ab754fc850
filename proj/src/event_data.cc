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

#include "xgx/event_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "xgx/fingerprint.h"
#include "xgx/status.h"

namespace xgx {
namespace {

constexpr std::string_view kColumns[] = {
    "match_id",  "player",           "team",          "opponent",
    "season",    "league",           "minute",        "home_away",
    "situation", "shot_type",        "last_action",   "distance_to_goal",
    "angle_to_goal", "is_goal",      "on_target"};
constexpr size_t kNumColumns = std::size(kColumns);

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string QuoteIfNeeded(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void BadValue(size_t row, std::string_view column,
                           std::string_view token, std::string_view why = {}) {
  std::string msg = "row " + std::to_string(row) + ", column " +
                    std::string(column) + ": '" + std::string(token) + "'";
  if (!why.empty()) msg += " (" + std::string(why) + ")";
  throw Error(ErrorCode::kBadValue, msg);
}

double ParseReal(std::string_view token, size_t row, std::string_view col) {
  double v = 0.0;
  const auto res =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() ||
      res.ptr != token.data() + token.size() || !std::isfinite(v)) {
    BadValue(row, col, token);
  }
  return v;
}

int ParseInt(std::string_view token, size_t row, std::string_view col) {
  int v = 0;
  const auto res =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() ||
      res.ptr != token.data() + token.size()) {
    BadValue(row, col, token);
  }
  return v;
}

bool ParseFlag(std::string_view token, size_t row, std::string_view col) {
  if (token == "1") return true;
  if (token == "0") return false;
  BadValue(row, col, token, "expected 0 or 1");
}

// Name of the column whose value breaks a schema invariant, if any.
std::pair<std::string_view, std::string> FirstViolation(const ShotEvent& e) {
  if (e.minute < 0 || e.minute > 130) {
    return {"minute", "minute must be in [0, 130]"};
  }
  if (!(e.distance_to_goal >= 0.0 && e.distance_to_goal <= 120.0)) {
    return {"distance_to_goal", "distance must be in [0, 120]"};
  }
  if (!(e.angle_to_goal > 0.0 && e.angle_to_goal <= 180.0)) {
    return {"angle_to_goal", "angle must be in (0, 180]"};
  }
  if (e.situation == Situation::kPenalty &&
      (e.distance_to_goal < 10.5 || e.distance_to_goal > 11.5)) {
    return {"distance_to_goal", "penalty distance must be in [10.5, 11.5]"};
  }
  if (e.is_goal && !e.on_target) {
    return {"on_target", "a goal must be on target"};
  }
  return {{}, {}};
}

}  // namespace

std::string_view ToString(HomeAway v) {
  return v == HomeAway::kHome ? "home" : "away";
}

std::string_view ToString(Situation v) {
  switch (v) {
    case Situation::kOpenPlay: return "OpenPlay";
    case Situation::kFromCorner: return "FromCorner";
    case Situation::kSetPiece: return "SetPiece";
    case Situation::kDirectFreekick: return "DirectFreekick";
    case Situation::kPenalty: return "Penalty";
  }
  return "";
}

std::string_view ToString(ShotType v) {
  switch (v) {
    case ShotType::kHead: return "Head";
    case ShotType::kLeftFoot: return "LeftFoot";
    case ShotType::kRightFoot: return "RightFoot";
    case ShotType::kOtherBodyPart: return "OtherBodyPart";
  }
  return "";
}

std::optional<HomeAway> ParseHomeAway(std::string_view s) {
  if (s == "home") return HomeAway::kHome;
  if (s == "away") return HomeAway::kAway;
  return std::nullopt;
}

std::optional<Situation> ParseSituation(std::string_view s) {
  for (auto v : {Situation::kOpenPlay, Situation::kFromCorner,
                 Situation::kSetPiece, Situation::kDirectFreekick,
                 Situation::kPenalty}) {
    if (ToString(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<ShotType> ParseShotType(std::string_view s) {
  for (auto v : {ShotType::kHead, ShotType::kLeftFoot, ShotType::kRightFoot,
                 ShotType::kOtherBodyPart}) {
    if (ToString(v) == s) return v;
  }
  return std::nullopt;
}

std::string ValidateEvent(const ShotEvent& event) {
  return FirstViolation(event).second;
}

std::vector<ShotEvent> ParseCsv(std::istream& in) {
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw Error(ErrorCode::kEmptyFile, "no header row");
  // Strip a UTF-8 byte order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  const std::vector<std::string> header = SplitCsvLine(line);
  size_t position[kNumColumns];
  for (size_t c = 0; c < kNumColumns; ++c) {
    const auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw Error(ErrorCode::kMissingColumn, std::string(kColumns[c]));
    }
    position[c] = static_cast<size_t>(it - header.begin());
  }

  std::vector<ShotEvent> events;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      BadValue(row, "*", line,
               "expected " + std::to_string(header.size()) + " fields, got " +
                   std::to_string(fields.size()));
    }
    auto field = [&](size_t c) -> const std::string& {
      return fields[position[c]];
    };
    ShotEvent e;
    e.match_id = field(0);
    e.player = field(1);
    e.team = field(2);
    e.opponent = field(3);
    e.season = field(4);
    e.league = field(5);
    e.minute = ParseInt(field(6), row, kColumns[6]);
    if (auto v = ParseHomeAway(field(7))) {
      e.home_away = *v;
    } else {
      BadValue(row, kColumns[7], field(7));
    }
    if (auto v = ParseSituation(field(8))) {
      e.situation = *v;
    } else {
      BadValue(row, kColumns[8], field(8));
    }
    if (auto v = ParseShotType(field(9))) {
      e.shot_type = *v;
    } else {
      BadValue(row, kColumns[9], field(9));
    }
    e.last_action = field(10);
    if (e.last_action.empty()) BadValue(row, kColumns[10], field(10));
    e.distance_to_goal = ParseReal(field(11), row, kColumns[11]);
    e.angle_to_goal = ParseReal(field(12), row, kColumns[12]);
    e.is_goal = ParseFlag(field(13), row, kColumns[13]);
    e.on_target = ParseFlag(field(14), row, kColumns[14]);

    const auto [column, why] = FirstViolation(e);
    if (!why.empty()) {
      const size_t c = static_cast<size_t>(
          std::find(std::begin(kColumns), std::end(kColumns), column) -
          std::begin(kColumns));
      BadValue(row, column, field(c), why);
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<ShotEvent> ParseCsvFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ParseCsv(in);
}

void WriteCsv(std::ostream& out, std::span<const ShotEvent> events) {
  out << kCsvHeader << '\n';
  for (const ShotEvent& e : events) {
    out << QuoteIfNeeded(e.match_id) << ',' << QuoteIfNeeded(e.player) << ','
        << QuoteIfNeeded(e.team) << ',' << QuoteIfNeeded(e.opponent) << ','
        << QuoteIfNeeded(e.season) << ',' << QuoteIfNeeded(e.league) << ','
        << e.minute << ',' << ToString(e.home_away) << ','
        << ToString(e.situation) << ',' << ToString(e.shot_type) << ','
        << QuoteIfNeeded(e.last_action) << ','
        << FormatDouble(e.distance_to_goal) << ','
        << FormatDouble(e.angle_to_goal) << ',' << (e.is_goal ? 1 : 0) << ','
        << (e.on_target ? 1 : 0) << '\n';
  }
}

void WriteCsvFile(const std::string& path, std::span<const ShotEvent> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  WriteCsv(out, events);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Encoding

std::optional<size_t> FeatureSpec::LevelIndex(std::string_view level) const {
  for (size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == level) return i;
  }
  if (has_other()) return levels.size() - 1;
  return std::nullopt;
}

FeatureValue RawFeature(const ShotEvent& event, std::string_view feature) {
  if (feature == "minute") return static_cast<double>(event.minute);
  if (feature == "home_away") return std::string(ToString(event.home_away));
  if (feature == "situation") return std::string(ToString(event.situation));
  if (feature == "shot_type") return std::string(ToString(event.shot_type));
  if (feature == "last_action") return event.last_action;
  if (feature == "distance_to_goal") return event.distance_to_goal;
  if (feature == "angle_to_goal") return event.angle_to_goal;
  throw Error(ErrorCode::kUnknownFeature, std::string(feature));
}

FeatureEncoding::FeatureEncoding(std::vector<FeatureSpec> features,
                                 int rare_threshold)
    : features_(std::move(features)), rare_threshold_(rare_threshold) {
  size_t offset = 0;
  for (FeatureSpec& f : features_) {
    f.offset = offset;
    f.width = f.kind == FeatureKind::kContinuous ? 1 : f.levels.size();
    if (f.kind == FeatureKind::kCategorical && f.levels.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "categorical feature " + f.name + " has no levels");
    }
    offset += f.width;
  }
  num_columns_ = offset;
}

size_t FeatureEncoding::FeatureIndex(std::string_view name) const {
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  throw Error(ErrorCode::kUnknownFeature, std::string(name));
}

const FeatureSpec& FeatureEncoding::Feature(std::string_view name) const {
  return features_[FeatureIndex(name)];
}

bool FeatureEncoding::HasFeature(std::string_view name) const {
  return std::any_of(features_.begin(), features_.end(),
                     [&](const FeatureSpec& f) { return f.name == name; });
}

std::vector<std::string> FeatureEncoding::ColumnNames() const {
  std::vector<std::string> names;
  names.reserve(num_columns_);
  for (const FeatureSpec& f : features_) {
    if (f.kind == FeatureKind::kContinuous) {
      names.push_back(f.name);
    } else {
      for (const std::string& level : f.levels) {
        names.push_back(f.name + "=" + level);
      }
    }
  }
  return names;
}

void FeatureEncoding::EncodeInto(const ShotEvent& event,
                                 std::span<double> row) const {
  if (row.size() != num_columns_) {
    throw Error(ErrorCode::kDimensionMismatch, "encoded row width");
  }
  for (const FeatureSpec& f : features_) {
    const FeatureValue value = RawFeature(event, f.name);
    if (f.kind == FeatureKind::kContinuous) {
      row[f.offset] = std::get<double>(value);
      continue;
    }
    const std::string& label = std::get<std::string>(value);
    const auto level = f.LevelIndex(label);
    if (!level) {
      throw Error(ErrorCode::kUnknownLevel, f.name + "=" + label);
    }
    std::fill_n(row.begin() + f.offset, f.width, 0.0);
    row[f.offset + *level] = 1.0;
  }
}

std::vector<FeatureValue> FeatureEncoding::Decode(
    std::span<const double> row) const {
  if (row.size() != num_columns_) {
    throw Error(ErrorCode::kDimensionMismatch, "encoded row width");
  }
  std::vector<FeatureValue> values;
  values.reserve(features_.size());
  for (const FeatureSpec& f : features_) {
    if (f.kind == FeatureKind::kContinuous) {
      values.emplace_back(row[f.offset]);
      continue;
    }
    size_t best = 0;
    for (size_t l = 1; l < f.width; ++l) {
      if (row[f.offset + l] > row[f.offset + best]) best = l;
    }
    values.emplace_back(f.levels[best]);
  }
  return values;
}

FeatureEncoding BuildEncoding(std::span<const ShotEvent> events,
                              int rare_threshold) {
  if (events.empty()) throw Error(ErrorCode::kEmptyInput, "no events");
  std::vector<FeatureSpec> specs;
  for (std::string_view name : kFeatureNames) {
    FeatureSpec spec;
    spec.name = std::string(name);
    if (std::holds_alternative<double>(RawFeature(events.front(), name))) {
      spec.kind = FeatureKind::kContinuous;
      specs.push_back(std::move(spec));
      continue;
    }
    spec.kind = FeatureKind::kCategorical;
    std::map<std::string, int> counts;
    for (const ShotEvent& e : events) {
      ++counts[std::get<std::string>(RawFeature(e, name))];
    }
    std::vector<std::pair<std::string, int>> kept;
    bool merged = false;
    for (const auto& [level, count] : counts) {
      if (count >= rare_threshold) {
        kept.emplace_back(level, count);
      } else {
        merged = true;
      }
    }
    // std::map iteration is lexicographic, so a stable sort on count keeps
    // ties in lexicographic order.
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a,
                                                  const auto& b) {
      return a.second > b.second;
    });
    for (auto& [level, count] : kept) spec.levels.push_back(level);
    if (merged) spec.levels.emplace_back(kOtherLevel);
    specs.push_back(std::move(spec));
  }
  return FeatureEncoding(std::move(specs), rare_threshold);
}

std::string EncodedDataset::Fingerprint() const {
  xgx::Fingerprint fp;
  for (const std::string& name : encoding.ColumnNames()) fp.Add(name);
  fp.Add(static_cast<uint64_t>(features.rows()));
  fp.Add(std::span<const double>(features.data()));
  fp.Add(std::span<const double>(is_goal));
  fp.Add(std::span<const double>(on_target));
  return fp.Hex();
}

EncodedDataset Encode(std::span<const ShotEvent> events,
                      const FeatureEncoding& encoding) {
  if (events.empty()) throw Error(ErrorCode::kEmptyInput, "no events");
  EncodedDataset out;
  out.encoding = encoding;
  out.features = Matrix(events.size(), encoding.num_columns());
  out.is_goal.reserve(events.size());
  out.on_target.reserve(events.size());
  for (size_t i = 0; i < events.size(); ++i) {
    encoding.EncodeInto(events[i], out.features.row(i));
    out.is_goal.push_back(events[i].is_goal ? 1.0 : 0.0);
    out.on_target.push_back(events[i].on_target ? 1.0 : 0.0);
  }
  out.events.assign(events.begin(), events.end());
  return out;
}

// ---------------------------------------------------------------------------
// Selection

bool GroupSelector::Matches(const ShotEvent& e) const {
  if (player && e.player != *player) return false;
  if (team) {
    const std::string& subject =
        role == Role::kConceded ? e.opponent : e.team;
    if (subject != *team) return false;
  }
  if (opponent && e.opponent != *opponent) return false;
  if (season && e.season != *season) return false;
  if (league && e.league != *league) return false;
  if (home_away && e.home_away != *home_away) return false;
  if (on_target && e.on_target != *on_target) return false;
  return true;
}

std::string GroupSelector::Describe() const {
  std::vector<std::string> terms;
  if (player) terms.push_back("player=" + *player);
  if (team) terms.push_back("team=" + *team);
  if (opponent) terms.push_back("opponent=" + *opponent);
  if (season) terms.push_back("season=" + *season);
  if (league) terms.push_back("league=" + *league);
  if (home_away) terms.push_back("home_away=" + std::string(ToString(*home_away)));
  if (on_target) terms.push_back(std::string("on_target=") + (*on_target ? "1" : "0"));
  if (role) terms.push_back(std::string("role=") +
                            (*role == Role::kTaken ? "taken" : "conceded"));
  if (terms.empty()) return "all";
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ", ";
    out += terms[i];
  }
  return out;
}

GroupSelector ParseSelector(std::span<const std::string> terms) {
  GroupSelector sel;
  for (const std::string& term : terms) {
    const size_t eq = term.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "selector term '" + term + "' is not key=value");
    }
    const std::string key = term.substr(0, eq);
    std::string value = term.substr(eq + 1);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    GroupSelector one;
    if (key == "player") {
      one.player = value;
    } else if (key == "team") {
      one.team = value;
    } else if (key == "opponent") {
      one.opponent = value;
    } else if (key == "season") {
      one.season = value;
    } else if (key == "league") {
      one.league = value;
    } else if (key == "home_away") {
      one.home_away = ParseHomeAway(value);
      if (!one.home_away) {
        throw Error(ErrorCode::kInvalidArgument, "home_away=" + value);
      }
    } else if (key == "on_target") {
      if (value == "1" || value == "true") {
        one.on_target = true;
      } else if (value == "0" || value == "false") {
        one.on_target = false;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "on_target=" + value);
      }
    } else if (key == "role") {
      if (value == "taken") {
        one.role = Role::kTaken;
      } else if (value == "conceded") {
        one.role = Role::kConceded;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "role=" + value);
      }
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown selector key " + key);
    }
    sel = Intersect(sel, one);
  }
  return sel;
}

namespace {
template <typename T>
void Merge(std::optional<T>& into, const std::optional<T>& other,
           std::string_view key) {
  if (!other) return;
  if (into && *into != *other) {
    throw Error(ErrorCode::kInvalidArgument,
                "conflicting values for selector key " + std::string(key));
  }
  into = other;
}
}  // namespace

GroupSelector Intersect(const GroupSelector& a, const GroupSelector& b) {
  GroupSelector out = a;
  Merge(out.player, b.player, "player");
  Merge(out.team, b.team, "team");
  Merge(out.opponent, b.opponent, "opponent");
  Merge(out.season, b.season, "season");
  Merge(out.league, b.league, "league");
  Merge(out.home_away, b.home_away, "home_away");
  Merge(out.on_target, b.on_target, "on_target");
  Merge(out.role, b.role, "role");
  return out;
}

std::vector<size_t> Select(const EncodedDataset& dataset,
                           const GroupSelector& selector) {
  std::vector<size_t> rows;
  for (size_t i = 0; i < dataset.events.size(); ++i) {
    if (selector.Matches(dataset.events[i])) rows.push_back(i);
  }
  return rows;
}

bool IsTrainingMatch(std::string_view match_id, int train_percent) {
  return static_cast<int>(HashString(match_id) % 100) < train_percent;
}

SplitIndices SplitByMatch(const EncodedDataset& dataset, int train_percent) {
  SplitIndices split;
  for (size_t i = 0; i < dataset.events.size(); ++i) {
    if (IsTrainingMatch(dataset.events[i].match_id, train_percent)) {
      split.train.push_back(i);
    } else {
      split.test.push_back(i);
    }
  }
  return split;
}

EncodedDataset Subset(const EncodedDataset& dataset,
                      std::span<const size_t> rows) {
  EncodedDataset out;
  out.encoding = dataset.encoding;
  out.features = dataset.features.SelectRows(rows);
  for (size_t r : rows) {
    out.is_goal.push_back(dataset.is_goal[r]);
    out.on_target.push_back(dataset.on_target[r]);
    out.events.push_back(dataset.events[r]);
  }
  return out;
}

}  // namespace xgx
