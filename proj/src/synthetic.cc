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

#include "xgx/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace xgx::synth {
namespace {

// Distribution transforms are written out here rather than taken from
// <random> so the corpus is identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  size_t Below(size_t n) { return static_cast<size_t>(engine_() % n); }
  bool Bernoulli(double p) { return Uniform() < p; }
  double Normal() {
    // Box-Muller; 1 - U keeps the log argument positive.
    const double u1 = 1.0 - Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  size_t Choice(const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = Uniform() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    return weights.size() - 1;
  }
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[Below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

double Round1(double v) { return std::round(v * 10.0) / 10.0; }

const std::map<std::string, double>& LastActionEffects() {
  static const std::map<std::string, double> effects = {
      {"Throughball", 0.60}, {"Rebound", 0.45},  {"Chipped", 0.30},
      {"TakeOn", 0.20},      {"Pass", 0.10},     {"GoodSkill", 0.15},
      {"BallRecovery", 0.10}, {"HeadPass", -0.10}, {"Cross", -0.35},
      {"Aerial", -0.30},     {"Standard", 0.0},  {"LayOff", 0.05},
      {"Dispossessed", -0.20}, {"Error", 0.50}};
  return effects;
}

// Style shifts applied to every shot of a team in one season.
struct Style {
  double distance_shift = 0.0;
  double cross_share = 0.0;  // Extra probability of a Cross last action.
};

void SampleFeatures(Rng& rng, const Style& style, ShotEvent& e) {
  static const std::vector<double> kSituation = {0.72, 0.12, 0.08, 0.05, 0.03};
  e.situation = static_cast<Situation>(rng.Choice(kSituation));
  std::vector<double> shot_type;  // Head, Left, Right, Other
  switch (e.situation) {
    case Situation::kFromCorner:
    case Situation::kSetPiece: shot_type = {0.55, 0.17, 0.25, 0.03}; break;
    case Situation::kDirectFreekick:
    case Situation::kPenalty: shot_type = {0.0, 0.4, 0.6, 0.0}; break;
    default: shot_type = {0.12, 0.34, 0.50, 0.04}; break;
  }
  e.shot_type = static_cast<ShotType>(rng.Choice(shot_type));

  double distance;
  double angle;
  if (e.situation == Situation::kPenalty) {
    distance = 11.0 + 0.6 * (rng.Uniform() - 0.5);
    angle = 90.0;
  } else {
    if (e.situation == Situation::kDirectFreekick) {
      distance = 17.0 + 13.0 * rng.Uniform();
    } else if (e.shot_type == ShotType::kHead) {
      distance = 3.0 + 11.0 * std::pow(rng.Uniform(), 1.2);
    } else {
      distance = 3.0 + 30.0 * std::pow(rng.Uniform(), 1.2);
    }
    distance = std::clamp(distance + style.distance_shift, 1.0, 45.0);
    const double spread = 15.0 + 300.0 / (distance + 5.0);
    angle = std::clamp(90.0 + spread * rng.Normal(), 5.0, 175.0);
  }
  e.distance_to_goal = Round1(distance);
  e.angle_to_goal = Round1(angle);

  const auto& labels = LastActionLabels();
  if (e.situation == Situation::kPenalty ||
      e.situation == Situation::kDirectFreekick) {
    e.last_action = "Standard";
  } else if ((e.situation == Situation::kFromCorner && rng.Bernoulli(0.5)) ||
             rng.Bernoulli(style.cross_share)) {
    e.last_action = "Cross";
  } else {
    // Zipf(2) over the label ranks.
    std::vector<double> weights(labels.size());
    for (size_t k = 0; k < labels.size(); ++k) {
      weights[k] = 1.0 / static_cast<double>((k + 1) * (k + 1));
    }
    e.last_action = labels[rng.Choice(weights)];
  }
  e.minute = static_cast<int>(1 + rng.Below(95));
}

void DrawOutcome(Rng& rng, ShotEvent& e, double p) {
  e.is_goal = rng.Bernoulli(p);
  e.on_target = e.is_goal || rng.Bernoulli(0.28);
}

// Efraimidis-Spirakis weighted sample of `count` indices without
// replacement, weights = true goal probabilities.
std::vector<size_t> WeightedPick(Rng& rng, const std::vector<size_t>& pool,
                                 const std::vector<double>& weights,
                                 size_t count) {
  if (count > pool.size()) {
    throw std::logic_error("fixture target exceeds available shots");
  }
  std::vector<std::pair<double, size_t>> keyed;
  for (size_t i : pool) {
    const double u = 1.0 - rng.Uniform();
    keyed.emplace_back(std::log(u) / weights[i], i);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<size_t> out;
  for (size_t k = 0; k < count; ++k) out.push_back(keyed[k].second);
  return out;
}

struct LeagueSeason {
  std::string league;
  std::string code;
  std::string season;
  std::vector<std::string> teams;
};

std::string SeasonCode(const std::string& season) {
  // "2022/23" -> "2223"
  return season.substr(2, 2) + season.substr(5, 2);
}

}  // namespace

const std::vector<std::string>& LastActionLabels() {
  static const std::vector<std::string> labels = {
      "Pass",          "Cross",        "None",           "Rebound",
      "TakeOn",        "HeadPass",     "Throughball",    "BallRecovery",
      "Chipped",       "LayOff",       "Aerial",         "BallTouch",
      "Dispossessed",  "Tackle",       "Interception",   "Foul",
      "Clearance",     "CornerAwarded", "GoodSkill",     "BlockedPass",
      "Challenge",     "OffsidePass",  "Save",           "Error",
      "KeeperPickup",  "ShieldBallOpp", "Smother",       "Standard",
      "Punch",         "Claim",        "CrossNotClaimed", "OffsideProvoked",
      "KeeperSweeper", "Card",         "FormationChange", "Goal",
      "End",           "Start",        "SubstitutionOn"};
  return labels;
}

double TrueGoalProbability(const ShotEvent& e) {
  const double closeness = 90.0 - std::abs(e.angle_to_goal - 90.0);
  double logit = -0.4 - 0.13 * e.distance_to_goal + 0.015 * closeness;
  switch (e.situation) {
    case Situation::kPenalty: logit += 1.6; break;
    case Situation::kDirectFreekick: logit -= 0.3; break;
    case Situation::kFromCorner: logit -= 0.2; break;
    case Situation::kSetPiece: logit -= 0.1; break;
    case Situation::kOpenPlay: break;
  }
  switch (e.shot_type) {
    case ShotType::kHead: logit -= 0.9; break;
    case ShotType::kOtherBodyPart: logit -= 0.5; break;
    case ShotType::kRightFoot: logit += 0.05; break;
    case ShotType::kLeftFoot: break;
  }
  if (e.home_away == HomeAway::kHome) logit += 0.08;
  logit += 0.004 * (e.minute - 45);
  const auto& effects = LastActionEffects();
  if (auto it = effects.find(e.last_action); it != effects.end()) {
    logit += it->second;
  }
  return 1.0 / (1.0 + std::exp(-logit));
}

std::vector<LabeledShot> GenerateShots(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledShot> out;
  out.reserve(n);
  char buf[64];
  for (size_t i = 0; i < n; ++i) {
    LabeledShot shot;
    ShotEvent& e = shot.event;
    const size_t match = i / 24;
    std::snprintf(buf, sizeof buf, "syn-%06zu", match);
    e.match_id = buf;
    const bool home = rng.Bernoulli(0.5);
    const size_t a = (2 * match) % 20;
    const size_t b = (2 * match + 1) % 20;
    e.team = "Team " + std::to_string(home ? a : b);
    e.opponent = "Team " + std::to_string(home ? b : a);
    e.player = e.team + " Player " + std::to_string(rng.Below(14));
    e.season = "2022/23";
    e.league = "Synthetic";
    e.home_away = home ? HomeAway::kHome : HomeAway::kAway;
    SampleFeatures(rng, Style{}, e);
    shot.true_probability = TrueGoalProbability(e);
    DrawOutcome(rng, e, shot.true_probability);
    out.push_back(std::move(shot));
  }
  return out;
}

const std::vector<PlayerTarget>& PlayerTargets() {
  static const std::vector<PlayerTarget> targets = {
      {"Youssoufa Moukoko", "Borussia Dortmund", "Bundesliga", 35, 7},
      {"Alejandro Garnacho", "Manchester United", "EPL", 24, 3},
      {"Mathys Tel", "Bayern Munich", "Bundesliga", 20, 5},
      {"Jamie Bynoe-Gittens", "Borussia Dortmund", "Bundesliga", 24, 3},
      {"Evan Ferguson", "Brighton & Hove Albion", "EPL", 36, 6}};
  return targets;
}

const std::vector<KeeperTarget>& KeeperTargets() {
  static const std::vector<KeeperTarget> targets = {
      {"Marvin Schwabe", "FC Köln", "Bundesliga", 54},
      {"Alex Remino", "RCD Espanyol", "La Liga", 69},
      {"David Raya", "Brentford FC", "EPL", 46}};
  return targets;
}

std::vector<ShotEvent> GenerateFixtureCorpus(uint64_t seed) {
  const std::vector<LeagueSeason> leagues = {
      {"Bundesliga", "BUN", "2022/23",
       {"Borussia Dortmund", "Bayern Munich", "FC Köln", "RB Leipzig",
        "Union Berlin", "SC Freiburg", "VfL Wolfsburg", "Eintracht Frankfurt",
        "Bayer Leverkusen", "Mainz 05", "Borussia Mönchengladbach",
        "Werder Bremen", "FC Augsburg", "VfL Bochum", "VfB Stuttgart",
        "TSG Hoffenheim", "Hertha BSC", "Schalke 04"}},
      {"EPL", "EPL", "2022/23",
       {"Manchester United", "Brighton & Hove Albion", "Brentford FC",
        "Arsenal", "Manchester City", "Newcastle United", "Liverpool",
        "Tottenham", "Aston Villa", "Fulham", "Crystal Palace", "Chelsea",
        "Wolverhampton", "West Ham", "Bournemouth", "Nottingham Forest",
        "Everton", "Leicester City", "Leeds United", "Southampton"}},
      {"La Liga", "LIG", "2022/23",
       {"RCD Espanyol", "Barcelona", "Real Madrid", "Atletico Madrid",
        "Real Sociedad", "Villarreal", "Real Betis", "Sevilla", "Osasuna",
        "Athletic Club", "Mallorca", "Girona", "Rayo Vallecano", "Celta Vigo",
        "Cadiz", "Getafe", "Valencia", "Almeria", "Valladolid", "Elche"}},
      {"Serie A", "SEA", "2021/22",
       {"SSC Napoli", "Inter", "AC Milan", "Juventus", "Lazio", "AS Roma",
        "Atalanta", "Fiorentina"}},
      {"Serie A", "SEA", "2022/23",
       {"SSC Napoli", "Inter", "AC Milan", "Juventus", "Lazio", "AS Roma",
        "Atalanta", "Fiorentina"}},
      {"Ligue 1", "LI1", "2020/21",
       {"Lille OSC", "Paris Saint-Germain", "AS Monaco", "Olympique Lyonnais",
        "Olympique de Marseille", "Stade Rennais", "OGC Nice", "RC Lens"}},
      {"Ligue 1", "LI1", "2021/22",
       {"Lille OSC", "Paris Saint-Germain", "AS Monaco", "Olympique Lyonnais",
        "Olympique de Marseille", "Stade Rennais", "OGC Nice", "RC Lens"}},
  };
  auto style_for = [](const std::string& team, const std::string& season) {
    Style s;
    if (team == "SSC Napoli") s.distance_shift = season == "2021/22" ? 3.0 : -2.0;
    if (team == "Lille OSC" && season == "2021/22") s.cross_share = 0.25;
    return s;
  };

  Rng rng(seed);
  std::vector<ShotEvent> shots;
  char buf[64];
  for (const LeagueSeason& ls : leagues) {
    int match_no = 0;
    // Shot indices per team for this league season.
    std::map<std::string, std::vector<size_t>> team_shots;
    for (size_t h = 0; h < ls.teams.size(); ++h) {
      for (size_t a = 0; a < ls.teams.size(); ++a) {
        if (h == a) continue;
        std::snprintf(buf, sizeof buf, "%s-%s-%04d", ls.code.c_str(),
                      SeasonCode(ls.season).c_str(), ++match_no);
        const std::string match_id = buf;
        for (int side = 0; side < 2; ++side) {
          const std::string& team = side == 0 ? ls.teams[h] : ls.teams[a];
          const std::string& opponent = side == 0 ? ls.teams[a] : ls.teams[h];
          const size_t count = 6 + rng.Below(13);
          for (size_t k = 0; k < count; ++k) {
            ShotEvent e;
            e.match_id = match_id;
            e.team = team;
            e.opponent = opponent;
            e.season = ls.season;
            e.league = ls.league;
            e.home_away = side == 0 ? HomeAway::kHome : HomeAway::kAway;
            SampleFeatures(rng, style_for(team, ls.season), e);
            team_shots[team].push_back(shots.size());
            shots.push_back(std::move(e));
          }
        }
      }
    }
    // Shooters: targeted players first, the rest from a generic roster.
    for (const std::string& team : ls.teams) {
      std::vector<size_t> pool = team_shots[team];
      rng.Shuffle(pool);
      size_t used = 0;
      for (const PlayerTarget& t : PlayerTargets()) {
        if (t.team != team || ls.season != "2022/23") continue;
        for (int k = 0; k < t.shots; ++k) shots[pool[used++]].player = t.player;
      }
      static const std::vector<double> kRosterWeights = {
          10, 9, 8, 7, 6, 5, 4, 4, 3, 3, 2, 2, 1, 1};
      for (; used < pool.size(); ++used) {
        std::snprintf(buf, sizeof buf, "%s Player %02zu", team.c_str(),
                      rng.Choice(kRosterWeights) + 1);
        shots[pool[used]].player = buf;
      }
    }
  }

  std::vector<double> truth(shots.size());
  for (size_t i = 0; i < shots.size(); ++i) truth[i] = TrueGoalProbability(shots[i]);
  std::vector<char> fixed(shots.size(), 0);
  auto assign = [&](const std::vector<size_t>& pool, int goals) {
    std::vector<size_t> open;
    int already = 0;
    for (size_t i : pool) {
      if (fixed[i]) {
        already += shots[i].is_goal ? 1 : 0;
      } else {
        open.push_back(i);
      }
    }
    const int needed = goals - already;
    if (needed < 0) throw std::logic_error("fixture goal target infeasible");
    const auto picked = WeightedPick(rng, open, truth, static_cast<size_t>(needed));
    std::set<size_t> chosen(picked.begin(), picked.end());
    for (size_t i : open) {
      fixed[i] = 1;
      shots[i].is_goal = chosen.count(i) > 0;
      shots[i].on_target = shots[i].is_goal || rng.Bernoulli(0.28);
    }
  };
  for (const PlayerTarget& t : PlayerTargets()) {
    std::vector<size_t> pool;
    for (size_t i = 0; i < shots.size(); ++i) {
      if (shots[i].player == t.player && shots[i].season == "2022/23") pool.push_back(i);
    }
    assign(pool, t.goals);
  }
  for (const KeeperTarget& t : KeeperTargets()) {
    std::vector<size_t> pool;
    for (size_t i = 0; i < shots.size(); ++i) {
      if (shots[i].opponent == t.team && shots[i].season == "2022/23") pool.push_back(i);
    }
    assign(pool, t.conceded_goals);
  }
  for (size_t i = 0; i < shots.size(); ++i) {
    if (!fixed[i]) DrawOutcome(rng, shots[i], truth[i]);
  }
  return shots;
}

}  // namespace xgx::synth
