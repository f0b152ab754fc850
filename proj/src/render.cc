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

// Static SVG charts for analysis reports. Output depends only on the report,
// so identical reports render to identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "xgx/analysis.h"
#include "xgx/status.h"

namespace xgx {
namespace {

constexpr double kWidth = 760;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 190;  // Legend column.
constexpr double kTop = 50;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

const char* Color(size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string Fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  // Avoid "-0.00".
  if (std::string(buf).find_first_not_of("-0.") == std::string::npos) {
    std::snprintf(buf, sizeof buf, "%.*f", digits, 0.0);
  }
  return buf;
}

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Rounds the top of the value axis up to a tenth.
double AxisTop(double max_value) {
  return std::max(0.1, std::ceil(max_value * 10.0 - 1e-9) / 10.0);
}

class Canvas {
 public:
  explicit Canvas(const std::string& title) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fmt(kWidth, 0)
         << "\" height=\"" << Fmt(kHeight, 0) << "\" viewBox=\"0 0 "
         << Fmt(kWidth, 0) << ' ' << Fmt(kHeight, 0)
         << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    Text(kWidth / 2, 24, title, "middle", 14);
  }

  void Line(double x1, double y1, double x2, double y2, const char* color,
            double width = 1.0, bool dashed = false) {
    out_ << "<line x1=\"" << Fmt(x1) << "\" y1=\"" << Fmt(y1) << "\" x2=\""
         << Fmt(x2) << "\" y2=\"" << Fmt(y2) << "\" stroke=\"" << color
         << "\" stroke-width=\"" << Fmt(width, 1) << '"';
    if (dashed) out_ << " stroke-dasharray=\"6,4\"";
    out_ << "/>\n";
  }

  void Rect(double x, double y, double w, double h, const char* color) {
    out_ << "<rect x=\"" << Fmt(x) << "\" y=\"" << Fmt(y) << "\" width=\""
         << Fmt(w) << "\" height=\"" << Fmt(h) << "\" fill=\"" << color
         << "\"/>\n";
  }

  void Polyline(const std::vector<std::pair<double, double>>& points,
                const char* color) {
    out_ << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"2.0\" points=\"";
    for (size_t i = 0; i < points.size(); ++i) {
      if (i) out_ << ' ';
      out_ << Fmt(points[i].first) << ',' << Fmt(points[i].second);
    }
    out_ << "\"/>\n";
  }

  void Text(double x, double y, std::string_view text,
            const char* anchor = "start", int size = 11,
            const char* extra = nullptr) {
    out_ << "<text x=\"" << Fmt(x) << "\" y=\"" << Fmt(y)
         << "\" text-anchor=\"" << anchor << "\" font-size=\"" << size << '"';
    if (extra) out_ << ' ' << extra;
    out_ << '>' << Escape(text) << "</text>\n";
  }

  void Legend(const std::vector<std::string>& labels,
              const std::vector<size_t>& colors) {
    const double x = kWidth - kRight + 20;
    for (size_t i = 0; i < labels.size(); ++i) {
      const double y = kTop + 14 + 18 * static_cast<double>(i);
      Rect(x, y - 9, 12, 10, Color(colors[i]));
      Text(x + 18, y, labels[i]);
    }
  }

  std::string Finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

struct PlotArea {
  double x0 = kLeft;
  double x1 = kWidth - kRight;
  double y0 = kHeight - kBottom;  // Bottom edge in pixels.
  double y1 = kTop;
};

void ValueAxis(Canvas& canvas, const PlotArea& area, double top,
               const std::string& label) {
  canvas.Line(area.x0, area.y0, area.x0, area.y1, "#333333");
  for (int t = 0; t <= 5; ++t) {
    const double v = top * t / 5.0;
    const double y = area.y0 - (area.y0 - area.y1) * t / 5.0;
    canvas.Line(area.x0 - 4, y, area.x0, y, "#333333");
    canvas.Line(area.x0, y, area.x1, y, "#eeeeee");
    canvas.Text(area.x0 - 8, y + 4, Fmt(v), "end");
  }
  const double mid = (area.y0 + area.y1) / 2;
  const std::string rotate = "transform=\"rotate(-90 18 " + Fmt(mid) + ")\"";
  canvas.Text(18, mid, label, "middle", 11, rotate.c_str());
}

std::vector<size_t> ActiveSubjects(const FeatureComparison& fc) {
  std::vector<size_t> out;
  for (size_t s = 0; s < fc.profiles.size(); ++s) {
    if (fc.profiles[s]) out.push_back(s);
  }
  return out;
}

std::string LineChart(const AnalysisReport& report,
                      const FeatureComparison& fc) {
  Canvas canvas("Aggregated profiles: " + fc.feature);
  const PlotArea area;
  const auto active = ActiveSubjects(fc);
  double max_value = 0.0;
  for (size_t s : active) {
    for (double v : fc.profiles[s]->values) max_value = std::max(max_value, v);
  }
  const double top = AxisTop(max_value);
  const double lo = fc.grid.values.front();
  const double hi = fc.grid.values.back();
  const double span = hi > lo ? hi - lo : 1.0;
  auto px = [&](double v) { return area.x0 + (area.x1 - area.x0) * (v - lo) / span; };
  auto py = [&](double v) { return area.y0 - (area.y0 - area.y1) * v / top; };

  ValueAxis(canvas, area, top, "average prediction");
  canvas.Line(area.x0, area.y0, area.x1, area.y0, "#333333");
  for (int t = 0; t <= 5; ++t) {
    const double v = lo + span * t / 5.0;
    canvas.Line(px(v), area.y0, px(v), area.y0 + 4, "#333333");
    canvas.Text(px(v), area.y0 + 18, Fmt(v, 1), "middle");
  }
  canvas.Text((area.x0 + area.x1) / 2, kHeight - 16, fc.feature, "middle", 12);

  std::vector<std::string> labels;
  for (size_t s : active) {
    std::vector<std::pair<double, double>> points;
    for (size_t z = 0; z < fc.grid.values.size(); ++z) {
      points.emplace_back(px(fc.grid.values[z]), py(fc.profiles[s]->values[z]));
    }
    canvas.Polyline(points, Color(s));
    labels.push_back(report.subjects[s].label);
  }
  if (fc.reference_mean) {
    const double x = px(*fc.reference_mean);
    canvas.Line(x, area.y0, x, area.y1, "#555555", 1.0, /*dashed=*/true);
    canvas.Text(x + 4, area.y1 + 10, "mean " + Fmt(*fc.reference_mean), "start", 10);
  }
  canvas.Legend(labels, active);
  return canvas.Finish();
}

std::string GroupedBarChart(const AnalysisReport& report,
                            const FeatureComparison& fc) {
  Canvas canvas("Aggregated profiles: " + fc.feature);
  const PlotArea area;
  const auto active = ActiveSubjects(fc);
  double max_value = 0.0;
  for (size_t s : active) {
    for (double v : fc.profiles[s]->values) max_value = std::max(max_value, v);
  }
  const double top = AxisTop(max_value);
  auto py = [&](double v) { return area.y0 - (area.y0 - area.y1) * v / top; };
  ValueAxis(canvas, area, top, "average prediction");
  canvas.Line(area.x0, area.y0, area.x1, area.y0, "#333333");

  const size_t levels = fc.grid.levels.size();
  const double slot = (area.x1 - area.x0) / static_cast<double>(levels);
  const double bar = slot * 0.8 / static_cast<double>(std::max<size_t>(1, active.size()));
  for (size_t z = 0; z < levels; ++z) {
    const double base = area.x0 + slot * static_cast<double>(z) + slot * 0.1;
    for (size_t a = 0; a < active.size(); ++a) {
      const double v = fc.profiles[active[a]]->values[z];
      canvas.Rect(base + bar * static_cast<double>(a), py(v), bar, area.y0 - py(v),
                  Color(active[a]));
    }
    canvas.Text(area.x0 + slot * (static_cast<double>(z) + 0.5), area.y0 + 16,
                fc.grid.levels[z], "middle", 10);
  }
  canvas.Text((area.x0 + area.x1) / 2, kHeight - 16, fc.feature, "middle", 12);
  std::vector<std::string> labels;
  for (size_t s : active) {
    std::string label = report.subjects[s].label;
    if (fc.blind_spots[s]) label += " (blind spot: " + *fc.blind_spots[s] + ")";
    labels.push_back(label);
  }
  canvas.Legend(labels, active);
  return canvas.Finish();
}

std::string ShapBarChart(const AggregatedAttribution& a) {
  Canvas canvas("aSHAP (" + std::string(ToString(a.mode)) + "): " + a.group);
  std::vector<size_t> order(a.features.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return std::abs(a.phi[x]) > std::abs(a.phi[y]);
  });
  double extent = 0.0;
  for (double v : a.phi) extent = std::max(extent, std::abs(v));
  if (extent == 0.0) extent = 1e-3;
  extent *= 1.1;

  const double label_w = 130;
  const double x0 = kLeft + label_w;
  const double x1 = kWidth - 60;
  const double mid = (x0 + x1) / 2;
  const double scale = (x1 - x0) / 2 / extent;
  const double row_h = (kHeight - kTop - kBottom) / static_cast<double>(std::max<size_t>(1, order.size()));

  canvas.Line(mid, kTop, mid, kHeight - kBottom, "#333333");
  for (size_t r = 0; r < order.size(); ++r) {
    const size_t j = order[r];
    const double y = kTop + row_h * static_cast<double>(r);
    const double v = a.phi[j];
    const double w = std::abs(v) * scale;
    canvas.Rect(v >= 0 ? mid : mid - w, y + row_h * 0.15, w, row_h * 0.7,
                v >= 0 ? "#2ca02c" : "#d62728");
    canvas.Text(x0 - 10, y + row_h * 0.5 + 4, a.features[j], "end");
    canvas.Text(v >= 0 ? mid + w + 4 : mid - w - 4, y + row_h * 0.5 + 4,
                Fmt(v, 4), v >= 0 ? "start" : "end", 10);
  }
  canvas.Text(kWidth / 2, kHeight - 30,
              "baseline phi0 = " + Fmt(a.phi0, 4) + ", mean prediction = " +
                  Fmt(a.mean_prediction, 4) + ", n = " + std::to_string(a.n),
              "middle", 11);
  return canvas.Finish();
}

std::string FileToken(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-';
    out.push_back(keep ? c : '-');
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RenderSvgDocuments(
    const AnalysisReport& report) {
  std::vector<std::pair<std::string, std::string>> docs;
  const std::string prefix(ToString(report.workflow));
  for (const FeatureComparison& fc : report.features) {
    const std::string body = fc.grid.kind == FeatureKind::kContinuous
                                 ? LineChart(report, fc)
                                 : GroupedBarChart(report, fc);
    docs.emplace_back(prefix + "_" + FileToken(fc.feature) + ".svg", body);
  }
  for (size_t i = 0; i < report.attributions.size(); ++i) {
    const std::string tag =
        i < report.seasons.size() ? report.seasons[i] : std::to_string(i);
    docs.emplace_back(prefix + "_" + FileToken(tag) + ".svg",
                      ShapBarChart(report.attributions[i]));
  }
  return docs;
}

std::vector<std::string> RenderSvg(const AnalysisReport& report,
                                   const std::string& out_dir) {
  const auto docs = RenderSvgDocuments(report);
  std::vector<std::string> paths;
  if (docs.empty()) return paths;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir + ": " + ec.message());
  for (const auto& [name, body] : docs) {
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace xgx
