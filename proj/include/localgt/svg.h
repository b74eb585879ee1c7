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

#ifndef LOCALGT_SVG_H_
#define LOCALGT_SVG_H_

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace localgt {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
};

// Static SVG 1.1 line chart with axes, ticks and a legend. On a log axis
// nonpositive and non-finite points are dropped.
void WriteSvgPlot(std::ostream& out, const PlotSpec& spec, std::span<const PlotSeries> series);

}  // namespace localgt

#endif  // LOCALGT_SVG_H_
