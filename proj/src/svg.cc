// Copyright 2026 The localgt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "localgt/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace localgt {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void WriteSvgPlot(std::ostream& out, const PlotSpec& spec, std::span<const PlotSeries> series) {
  auto usable = [&](double y) { return std::isfinite(y) && (!spec.log_y || y > 0); };
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.y[i]) || !std::isfinite(s.x[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (spec.log_y) {
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
  }
  if (y1 == y0) y1 = y0 + 1;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1 - (y - y0) / (y1 - y0)) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << Num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">"
      << Escape(spec.title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // y ticks: decades on a log axis, five steps otherwise.
  const int ny = spec.log_y ? static_cast<int>(y1 - y0) : 5;
  const int ystep = std::max(1, ny / 8);
  for (int i = 0; i <= ny; i += ystep) {
    const double v = y0 + (y1 - y0) * i / ny;
    const std::string label = spec.log_y ? "1e" + Tick(v) : Tick(v);
    out << "<line x1=\"" << kLeft - 4 << "\" x2=\"" << kLeft << "\" y1=\"" << Num(py(v))
        << "\" y2=\"" << Num(py(v)) << "\" stroke=\"black\"/>"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << Num(py(v) + 4) << "\" text-anchor=\"end\">"
        << label << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = x0 + (x1 - x0) * i / 5;
    out << "<line x1=\"" << Num(px(v)) << "\" x2=\"" << Num(px(v)) << "\" y1=\"" << kTop + ph
        << "\" y2=\"" << kTop + ph + 4 << "\" stroke=\"black\"/>"
        << "<text x=\"" << Num(px(v)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << Tick(std::round(v * 100) / 100) << "</text>\n";
  }
  out << "<text x=\"" << Num(kLeft + pw / 2) << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">" << Escape(spec.x_label) << "</text>\n"
      << "<text transform=\"translate(16," << Num(kTop + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(spec.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.y[i]) || !std::isfinite(s.x[i])) continue;
      out << (first ? "" : " ") << Num(px(s.x[i])) << ',' << Num(py(ty(s.y[i])));
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 12 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << kLeft + pw + 12 << "\" x2=\"" << kLeft + pw + 36 << "\" y1=\"" << ly
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << Escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace localgt
