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

#include "xgx/metrics.h"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "xgx/status.h"

namespace xgx {

SubjectRows ResolveSubject(const EncodedDataset& data,
                           const GroupSelector& subject,
                           const MetricOptions& options) {
  auto keep = [&](std::vector<size_t> rows) {
    if (!options.exclude_penalties) return rows;
    std::erase_if(rows, [&](size_t r) {
      return data.events[r].situation == Situation::kPenalty;
    });
    return rows;
  };
  SubjectRows out;
  GroupSelector taken = subject;
  taken.role = Role::kTaken;
  out.taken = keep(Select(data, taken));
  if (subject.team) {
    GroupSelector conceded = subject;
    conceded.role = Role::kConceded;
    conceded.player.reset();
    out.conceded = keep(Select(data, conceded));
  }
  return out;
}

MetricReport MetricsFromPredictions(std::span<const double> predictions,
                                    const EncodedDataset& data,
                                    std::span<const size_t> taken,
                                    std::span<const size_t> conceded,
                                    std::string group) {
  if (taken.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "subject has no shots: " + group);
  }
  if (predictions.size() != data.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction count");
  }
  MetricReport r;
  r.group = std::move(group);
  r.shots = taken.size();
  r.shots_conceded = conceded.size();
  for (size_t i : taken) {
    r.xg += predictions[i];
    r.xgot += predictions[i] * data.on_target[i];
    r.goals += data.is_goal[i] > 0.5 ? 1 : 0;
  }
  for (size_t i : conceded) {
    r.xga += predictions[i];
    r.xgaot += predictions[i] * data.on_target[i];
    r.goals_conceded += data.is_goal[i] > 0.5 ? 1 : 0;
  }
  r.delta = static_cast<double>(r.goals) - r.xg;
  r.xg_per_shot = r.xg / static_cast<double>(r.shots);
  if (!conceded.empty()) {
    r.xga_per_shot = r.xga / static_cast<double>(r.shots_conceded);
  }
  return r;
}

MetricReport ComputeMetrics(const Predictor& model, const EncodedDataset& data,
                            const GroupSelector& subject,
                            const MetricOptions& options) {
  const SubjectRows rows = ResolveSubject(data, subject, options);
  if (rows.taken.empty()) {
    throw Error(ErrorCode::kEmptyGroup,
                "subject has no shots: " + subject.Describe());
  }
  // Only predict rows the report reads.
  std::vector<double> predictions(data.size(), 0.0);
  for (size_t i : rows.taken) predictions[i] = model.Predict(data.row(i));
  for (size_t i : rows.conceded) predictions[i] = model.Predict(data.row(i));
  return MetricsFromPredictions(predictions, data, rows.taken, rows.conceded,
                                subject.Describe());
}

double PerformanceDelta(const MetricReport& report) {
  return static_cast<double>(report.goals) - report.xg;
}

nlohmann::json ToJson(const MetricReport& r) {
  nlohmann::json j = {{"group", r.group},
                      {"m", r.shots},
                      {"m_conceded", r.shots_conceded},
                      {"xg", r.xg},
                      {"xgot", r.xgot},
                      {"xga", r.xga},
                      {"xgaot", r.xgaot},
                      {"goals", r.goals},
                      {"goals_conceded", r.goals_conceded},
                      {"delta", r.delta},
                      {"xg_per_shot", r.xg_per_shot}};
  j["xga_per_shot"] = r.xga_per_shot ? nlohmann::json(*r.xga_per_shot) : nlohmann::json();
  return j;
}

namespace {
std::string Num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}
}  // namespace

void WriteMetricsCsv(std::ostream& out, std::span<const MetricReport> reports) {
  out << "group,m,m_conceded,xg,xgot,xga,xgaot,goals,goals_conceded,delta,"
         "xg_per_shot,xga_per_shot\n";
  for (const MetricReport& r : reports) {
    out << CsvField(r.group) << ',' << r.shots << ',' << r.shots_conceded << ','
        << Num(r.xg) << ',' << Num(r.xgot) << ',' << Num(r.xga) << ','
        << Num(r.xgaot) << ',' << r.goals << ',' << r.goals_conceded << ','
        << Num(r.delta) << ',' << Num(r.xg_per_shot) << ','
        << (r.xga_per_shot ? Num(*r.xga_per_shot) : std::string()) << '\n';
  }
}

}  // namespace xgx
